"""Contract tests for AI Agent Firewall API."""
