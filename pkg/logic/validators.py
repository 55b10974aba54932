from django.core.exceptions import ValidationError

from .exceptions import LogicError
from .grammar import parse_formula

MAX_SEARCH_SIZE = 4
MAX_EXTRA_VARIABLES = 2


def validate_formula(text):
    try:
        parse_formula(text)
    except LogicError as error:
        raise ValidationError(f"Invalid formula: {error}")


def validate_variable_list(text):
    for name in filter(None, (part.strip() for part in text.split(","))):
        if not name.isidentifier():
            raise ValidationError(f"{name!r} is not a variable name.")


def validate_search_size(size):
    if size > MAX_SEARCH_SIZE:
        raise ValidationError(f"Domains larger than {MAX_SEARCH_SIZE} are not searched online.")
