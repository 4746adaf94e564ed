"""secrit: flags potentially security-critical methods with lightweight code
metrics, ranks them into High/Medium/Low criticality levels, and generates
prevention-focused explanations through a pluggable LLM backend."""

__version__ = "0.1.0"

TOOL_NAME = "secrit"
