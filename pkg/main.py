"""
Run the interplab command line from a source checkout.
"""

from interplab.main import main


if __name__ == "__main__":
    main()
