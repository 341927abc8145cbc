import json


def ok(payload):
    return json.dumps(payload), 200, {"Content-Type": "application/json"}


def created(payload):
    return json.dumps(payload), 201, {"Content-Type": "application/json"}


def not_found(what):
    return json.dumps({"error": f"{what} not found"}), 404, {"Content-Type": "application/json"}
