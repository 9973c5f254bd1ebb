#!/usr/bin/env python
"""
Command-line entry point.

Besides the stock Django commands this exposes the simulator:

    python manage.py scan_squeezing --config fig2a
    python manage.py scan_postselection --config fig5a
    python manage.py pdt_stats --config fig2a
    python manage.py validate --config fig2a
"""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages from requirements.txt "
            "into the active environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
