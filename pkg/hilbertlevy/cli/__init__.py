"""Configuration-driven command-line front end."""
