"""Standalone mapping proxy: receive OSC, scale/route, re-emit.

Lets a second machine run the mapping layer when the analysis machine has
no headroom: raw descriptor messages come in on the listen port, mapped
synthesis-parameter messages go out to the target. Addresses that match no
configured input are forwarded unchanged.
"""

from __future__ import annotations

import threading

from .mapping import MappingState, route, scale
from .osc import Endpoint, OscMessage, OscReceiver, OscSender


class MappingProxy:
    def __init__(self, listen: Endpoint, mapping: MappingState, target: Endpoint):
        if (listen.host, listen.port) == (target.host, target.port):
            raise ValueError("listen and target endpoints must differ")
        self._lock = threading.Lock()
        self._mapping = mapping
        self._values = [0.0] * len(mapping.inputs)
        self.forwarded = 0
        self.mapped = 0
        self.sender = OscSender(target)
        self.receiver = OscReceiver(listen, callback=self._on_message)

    @property
    def mapping(self) -> MappingState:
        return self._mapping

    @mapping.setter
    def mapping(self, state: MappingState):
        with self._lock:
            self._mapping = state
            self._values = [0.0] * len(state.inputs)

    @property
    def malformed(self) -> int:
        return self.receiver.malformed

    def _on_message(self, m: OscMessage):
        with self._lock:
            mapping = self._mapping
            row = next((i for i, inp in enumerate(mapping.inputs)
                        if inp.address == m.address), None)
            if row is None or not m.args or not isinstance(m.args[0], (int, float)):
                self.sender.send(m)
                self.forwarded += 1
                return
            self._values[row] = float(m.args[0])
            routed = route(mapping.matrix, self._values)
            for j, out in enumerate(mapping.outputs):
                if mapping.matrix.gains[row][j] != 0.0:
                    self.sender.send(OscMessage(out.address,
                                                (scale(routed[j], out.scaler),)))
                    self.mapped += 1

    def close(self):
        self.receiver.close()
        self.sender.close()
