"""Entry point for running as a module: python -m featurelens"""

from featurelens.cli.main import app

if __name__ == "__main__":
    app()
