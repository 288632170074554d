"""Used by python to mark a directory as a package."""
