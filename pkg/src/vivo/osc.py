"""OSC 1.0 message encoding/decoding and UDP transport.

Wire format only, by choice: big-endian, 4-byte aligned, float32/int32/string
argument types, datagrams over UDP. Bundles are understood on receive and
emitted only when a frame produces more than one message. The sender runs
beside the analysis pipeline behind a bounded queue so a slow or dead
network peer can never stall a performance.
"""

from __future__ import annotations

import logging
import socket
import struct
import threading
import time
from collections import deque
from dataclasses import dataclass

log = logging.getLogger("vivo.osc")

#: OSC timetag meaning "now"; also the constant tag used for per-frame
#: bundles so identical frame streams serialize identically.
IMMEDIATELY = 1


class MalformedPacket(ValueError):
    """Raised by the decoder; transports drop and count, never crash."""


@dataclass(frozen=True)
class OscMessage:
    address: str
    args: tuple = ()

    def __post_init__(self):
        if not self.address.startswith("/"):
            raise ValueError("OSC address must start with '/'")
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Endpoint:
    """UDP peer address. Receivers may bind port 0 for an ephemeral port."""

    host: str
    port: int
    direction: str = "send"

    def __post_init__(self):
        if self.direction not in ("send", "receive"):
            raise ValueError("direction must be 'send' or 'receive'")
        lowest = 0 if self.direction == "receive" else 1
        if not (lowest <= self.port <= 65535):
            raise ValueError("port out of range 1-65535")


def _pad_string(s: str) -> bytes:
    raw = s.encode("utf-8") + b"\x00"
    return raw + b"\x00" * (-len(raw) % 4)


def encode(m: OscMessage) -> bytes:
    """Serialize one message: padded address, ',' + type tags, big-endian args."""
    tags = ","
    payload = b""
    for arg in m.args:
        if isinstance(arg, bool):
            raise ValueError("unsupported type tag")
        if isinstance(arg, int):
            tags += "i"
            payload += struct.pack(">i", arg)
        elif isinstance(arg, float):
            tags += "f"
            payload += struct.pack(">f", arg)
        elif isinstance(arg, str):
            tags += "s"
            payload += _pad_string(arg)
        else:
            raise ValueError("unsupported type tag")
    return _pad_string(m.address) + _pad_string(tags) + payload


def encode_bundle(messages, timetag: int = IMMEDIATELY) -> bytes:
    """Wrap messages in a '#bundle' packet with the given 64-bit timetag."""
    out = _pad_string("#bundle") + struct.pack(">Q", timetag)
    for m in messages:
        enc = encode(m)
        out += struct.pack(">i", len(enc)) + enc
    return out


def _read_padded_string(b: bytes, pos: int) -> tuple[str, int]:
    end = b.find(b"\x00", pos)
    if end < 0:
        raise MalformedPacket("malformed packet")
    raw = b[pos:end]
    next_pos = pos + ((end - pos) // 4 + 1) * 4
    if next_pos > len(b):
        raise MalformedPacket("malformed packet")
    if b[end:next_pos].strip(b"\x00"):
        raise MalformedPacket("malformed packet")
    return raw.decode("utf-8", errors="strict"), next_pos


def decode(b: bytes) -> OscMessage:
    """Inverse of :func:`encode` for a single (non-bundle) packet."""
    if len(b) < 4 or len(b) % 4 != 0:
        raise MalformedPacket("malformed packet")
    try:
        address, pos = _read_padded_string(b, 0)
        tags, pos = _read_padded_string(b, pos)
    except UnicodeDecodeError as exc:
        raise MalformedPacket("malformed packet") from exc
    if not address.startswith("/") or not tags.startswith(","):
        raise MalformedPacket("malformed packet")
    args = []
    for tag in tags[1:]:
        if tag == "i":
            if pos + 4 > len(b):
                raise MalformedPacket("malformed packet")
            args.append(struct.unpack(">i", b[pos:pos + 4])[0])
            pos += 4
        elif tag == "f":
            if pos + 4 > len(b):
                raise MalformedPacket("malformed packet")
            args.append(struct.unpack(">f", b[pos:pos + 4])[0])
            pos += 4
        elif tag == "s":
            try:
                s, pos = _read_padded_string(b, pos)
            except UnicodeDecodeError as exc:
                raise MalformedPacket("malformed packet") from exc
            args.append(s)
        else:
            raise MalformedPacket("malformed packet")
    return OscMessage(address, tuple(args))


def decode_packet(b: bytes) -> list[OscMessage]:
    """Decode a datagram into messages, flattening (nested) bundles."""
    if b.startswith(b"#bundle\x00"):
        if len(b) < 16 or len(b) % 4 != 0:
            raise MalformedPacket("malformed packet")
        pos = 16  # header + timetag
        messages = []
        while pos < len(b):
            if pos + 4 > len(b):
                raise MalformedPacket("malformed packet")
            size = struct.unpack(">i", b[pos:pos + 4])[0]
            pos += 4
            if size <= 0 or pos + size > len(b):
                raise MalformedPacket("malformed packet")
            messages.extend(decode_packet(b[pos:pos + size]))
            pos += size
        return messages
    return [decode(b)]


class OscSender:
    """Fire-and-forget UDP sender with a bounded queue.

    A worker thread drains the queue; when the queue is full the oldest
    entry is dropped and counted. Network errors are logged and counted,
    never raised into the pipeline.
    """

    def __init__(self, endpoint: Endpoint, queue_size: int = 256):
        if endpoint.direction != "send":
            raise ValueError("sender needs a send-direction endpoint")
        self.endpoint = endpoint
        self._queue: deque[bytes] = deque()
        self._queue_size = queue_size
        self._cond = threading.Condition()
        self._closed = False
        self.enqueued = 0
        self.sent = 0
        self.dropped = 0
        self.errors = 0
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name="osc-sender")
        self._thread.start()

    def send(self, m: OscMessage) -> int:
        """Enqueue one message; returns its sequence number."""
        return self.send_raw(encode(m))

    def send_bundle(self, messages, timetag: int = IMMEDIATELY) -> int:
        return self.send_raw(encode_bundle(messages, timetag))

    def send_raw(self, datagram: bytes) -> int:
        with self._cond:
            if len(self._queue) >= self._queue_size:
                self._queue.popleft()
                self.dropped += 1
            self._queue.append(datagram)
            self.enqueued += 1
            seq = self.enqueued
            self._cond.notify()
        return seq

    @property
    def queue_depth(self) -> int:
        with self._cond:
            return len(self._queue)

    def _run(self):
        while True:
            with self._cond:
                while not self._queue and not self._closed:
                    self._cond.wait()
                if self._closed and not self._queue:
                    return
                datagram = self._queue.popleft()
            try:
                self._sock.sendto(datagram, (self.endpoint.host, self.endpoint.port))
                self.sent += 1
            except OSError as exc:
                self.errors += 1
                log.warning("OSC send to %s:%d failed: %s",
                            self.endpoint.host, self.endpoint.port, exc)

    def flush(self, timeout: float = 1.0):
        """Block until the queue drains (best effort, for tests/shutdown)."""
        deadline = time.monotonic() + timeout
        while self.queue_depth and time.monotonic() < deadline:
            time.sleep(0.005)

    def close(self):
        self.flush()
        with self._cond:
            self._closed = True
            self._cond.notify()
        self._thread.join(timeout=1.0)
        self._sock.close()


class OscReceiver:
    """UDP listener delivering decoded messages to one consumer in order.

    Malformed packets are dropped and counted. Messages go to the callback
    when one is set, otherwise they buffer in an internal queue for polling.
    """

    def __init__(self, endpoint: Endpoint, callback=None):
        if endpoint.direction != "receive":
            raise ValueError("receiver needs a receive-direction endpoint")
        self.endpoint = endpoint
        self.callback = callback
        self.received = 0
        self.malformed = 0
        self._queue: deque[OscMessage] = deque()
        self._lock = threading.Lock()
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._sock.bind((endpoint.host, endpoint.port))
        self._sock.settimeout(0.1)
        self._closed = False
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name="osc-receiver")
        self._thread.start()

    @property
    def port(self) -> int:
        return self._sock.getsockname()[1]

    def _run(self):
        while not self._closed:
            try:
                data, _addr = self._sock.recvfrom(65536)
            except socket.timeout:
                continue
            except OSError:
                return
            try:
                messages = decode_packet(data)
            except MalformedPacket:
                self.malformed += 1
                continue
            for m in messages:
                self.received += 1
                if self.callback is not None:
                    self.callback(m)
                else:
                    with self._lock:
                        self._queue.append(m)

    def poll(self) -> OscMessage | None:
        with self._lock:
            return self._queue.popleft() if self._queue else None

    def drain(self) -> list[OscMessage]:
        with self._lock:
            out = list(self._queue)
            self._queue.clear()
        return out

    def close(self):
        self._closed = True
        self._thread.join(timeout=1.0)
        self._sock.close()
