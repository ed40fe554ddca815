import pytest

try:
    import polydist  # noqa: F401
except ImportError:
    pytest.exit("polydist module not installed; run pip install --no-build-isolation .", returncode=5)
