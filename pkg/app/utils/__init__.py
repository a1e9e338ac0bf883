# Utils package: exit-code mapping, NDJSON logging, record formatting
