"""Allow running as python -m discbound."""

from .cli import main

if __name__ == "__main__":
    main()
