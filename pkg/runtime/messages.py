"""
Messages
========

VALUE, COST and BEST messages and the per-cycle accounting record.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

# P* index and its fitness ride along with PB in every BEST message that has a new P*.
BEST_HEADER_SCALARS = 2


class MessageKind(str, Enum):
    VALUE = "VALUE"
    COST = "COST"
    BEST = "BEST"


@dataclass(frozen=True)
class BestPayload:
    """PB (particles whose p_best improved) plus the optional new global best."""

    improved_particles: Tuple[int, ...] = ()
    best_particle: Optional[int] = None
    best_fitness: Optional[float] = None

    @property
    def improved(self) -> bool:
        return self.best_particle is not None

    def __len__(self):
        return len(self.improved_particles) + (BEST_HEADER_SCALARS if self.improved else 0)


@dataclass(frozen=True)
class Message:
    kind: MessageKind
    sender: int
    receiver: int
    payload: Union[np.ndarray, BestPayload]

    @property
    def payload_len(self) -> int:
        return len(self.payload)


@dataclass
class CycleStats:
    cycle: int
    value_messages: int = 0
    cost_messages: int = 0
    best_messages: int = 0
    payload_scalars: int = 0
    hops: int = 0
    duration_s: float = 0.0
    sent_messages: dict = field(default_factory=dict)
    sent_scalars: dict = field(default_factory=dict)

    @property
    def total_messages(self) -> int:
        return self.value_messages + self.cost_messages + self.best_messages

    def record(self, message: Message):
        if message.kind is MessageKind.VALUE:
            self.value_messages += 1
        elif message.kind is MessageKind.COST:
            self.cost_messages += 1
        else:
            self.best_messages += 1
        size = message.payload_len
        self.payload_scalars += size
        self.sent_messages[message.sender] = self.sent_messages.get(message.sender, 0) + 1
        self.sent_scalars[message.sender] = self.sent_scalars.get(message.sender, 0) + size
