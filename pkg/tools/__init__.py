"""
Tools
=====

Benchmark generation, oracle checks, trace analysis and resource monitoring,
each behind a pydantic argument schema.
"""
