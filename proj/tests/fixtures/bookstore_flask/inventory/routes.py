from flask import Blueprint, request

from audit.log import log_restock
from common.auth import login_required
from common.responses import ok
from inventory import stock

bp = Blueprint("inventory", __name__)


@bp.route("/<book_id>", methods=["GET"])
def get_stock(book_id):
    return ok({"book_id": book_id, "level": stock.level_for(book_id)})


@bp.route("/<book_id>", methods=["PUT"])
@login_required
def restock(book_id):
    level = stock.set_level(book_id, request.get_json()["level"])
    log_restock(book_id, level)
    return ok({"book_id": book_id, "level": level})
