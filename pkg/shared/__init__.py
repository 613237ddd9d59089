__all__ = ["config_parser", "entity", "errors", "logs", "parallel"]
