# Intentionally left blank.
