# AI Firewall Tests
