import boto3


def create_tables():
    client = boto3.client("dynamodb")
    client.create_table(
        TableName="todos",
        KeySchema=[{"AttributeName": "todo_id", "KeyType": "HASH"}],
        AttributeDefinitions=[{"AttributeName": "todo_id", "AttributeType": "S"}],
        BillingMode="PAY_PER_REQUEST",
    )


if __name__ == "__main__":
    create_tables()
