import uuid

import boto3

from inventory.stock import reserve
from notifications.email import send_confirmation

_table = boto3.resource("dynamodb").Table("orders")


def checkout(user, body):
    order = {"order_id": str(uuid.uuid4()), "user": user, "lines": body["lines"]}
    _table.put_item(Item=order)
    send_confirmation(order)
    reserve(order)
    return order


def find_order(order_id):
    return _table.get_item(Key={"order_id": order_id}).get("Item")
