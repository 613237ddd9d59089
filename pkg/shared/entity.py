import json
from typing import Any, Type, TypeVar

from pydantic import BaseModel, ConfigDict, ValidationError

from shared.errors import DomainError


M = TypeVar("M", bound="Message")


class Message(BaseModel):
    """
    Base record for every value the library hands around.

    Unknown fields are rejected and instances serialize to JSON bytes, so any
    result can be written to disk and read back unchanged.
    """

    model_config = ConfigDict(extra="forbid")

    def __str__(self):
        return str(self.model_dump())

    def serialize(self) -> bytes:
        return self.model_dump_json().encode()

    @classmethod
    def deserialize(cls: Type[M], payload: bytes) -> M:
        json_str = payload.decode()
        return cls.model_validate_json(json_str)

    @classmethod
    def build(cls: Type[M], **fields: Any) -> M:
        """
        Construct the model, reporting invalid fields as a DomainError.

        Operations use this at their boundary so callers only ever see the
        library's own error types.
        """
        try:
            return cls(**fields)
        except ValidationError as e:
            raise DomainError(f"invalid {cls.__name__}: {e.errors(include_url=False)}") from e

    @classmethod
    def is_type(cls, payload: bytes) -> bool:
        try:
            data = json.loads(payload.decode())
            obj = cls.model_validate(data, strict=True)
            return type(obj) is cls
        except (ValidationError, json.JSONDecodeError, UnicodeDecodeError):
            return False


class FrozenMessage(Message):
    """Immutable record; safe to share between threads."""

    model_config = ConfigDict(extra="forbid", frozen=True)
