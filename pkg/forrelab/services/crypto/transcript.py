"""
Protocol transcripts as length-prefixed message lists.

Wire format: u16 message count, then per message
    u8 role length, role (UTF-8), u8 label length, label (UTF-8),
    u32 bit length, bits packed MSB first.
"""
import struct
from dataclasses import dataclass, field

import numpy as np

from forrelab.core.bits import bits_to_array, bits_to_hex
from forrelab.core.errors import ShapeMismatchError


@dataclass(frozen=True)
class TranscriptMessage:
    role: str
    label: str
    bits: str


@dataclass
class Transcript:
    messages: list[TranscriptMessage] = field(default_factory=list)

    def add(self, role: str, label: str, bits: str):
        self.messages.append(TranscriptMessage(role, label, bits))

    def by_role(self, role: str) -> list[TranscriptMessage]:
        return [m for m in self.messages if m.role == role]

    def to_bytes(self) -> bytes:
        out = [struct.pack("<H", len(self.messages))]
        for msg in self.messages:
            for text in (msg.role, msg.label):
                raw = text.encode("utf-8")
                out.append(struct.pack("<B", len(raw)) + raw)
            packed = np.packbits(bits_to_array(msg.bits)).tobytes() if msg.bits else b""
            out.append(struct.pack("<I", len(msg.bits)) + packed)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Transcript":
        try:
            (count,) = struct.unpack_from("<H", data, 0)
            pos = 2
            transcript = cls()
            for _ in range(count):
                texts = []
                for _ in range(2):
                    (size,) = struct.unpack_from("<B", data, pos)
                    texts.append(data[pos + 1:pos + 1 + size].decode("utf-8"))
                    pos += 1 + size
                (length,) = struct.unpack_from("<I", data, pos)
                pos += 4
                nbytes = (length + 7) // 8
                if pos + nbytes > len(data):
                    raise ShapeMismatchError("transcript truncated")
                bits = np.unpackbits(np.frombuffer(data[pos:pos + nbytes], dtype=np.uint8))[:length]
                pos += nbytes
                transcript.add(texts[0], texts[1], "".join("1" if b else "0" for b in bits))
        except (struct.error, UnicodeDecodeError) as e:
            raise ShapeMismatchError(f"malformed transcript: {e}") from e
        return transcript

    def format_hex(self) -> str:
        """One annotated line per message: ``role label (bits): hex``."""
        return "\n".join(
            f"{m.role:>8} {m.label:<6} ({len(m.bits):>3} bits): {bits_to_hex(m.bits) or '-'}"
            for m in self.messages
        )
