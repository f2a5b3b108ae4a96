"""
System Monitor
==============

Resource snapshots of the running process, logged at the end of experiments.
"""
import os

import psutil


def resource_snapshot() -> dict:
    process = psutil.Process(os.getpid())
    cpu_times = process.cpu_times()
    memory = process.memory_info()
    return {
        "cpu_user_s": cpu_times.user,
        "cpu_system_s": cpu_times.system,
        "rss_bytes": memory.rss,
        "cpu_count": psutil.cpu_count(),
    }
