"""Allow `python -m sumfunc`."""

from sumfunc.main import main

if __name__ == "__main__":
    raise SystemExit(main())
