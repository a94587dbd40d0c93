"""Integration tests for AI Firewall components."""
