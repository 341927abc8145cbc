from flask import Flask

from services.worker import audit, compute, fetch, notify

app = Flask(__name__)


@app.route("/flags", methods=["POST"])
async def flags():
    value = await fetch(1)
    await notify(2)
    total = compute(3)
    audit(4)
    return {"value": value, "total": total}
