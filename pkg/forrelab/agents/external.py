"""
Adversaries running as a separate process, speaking a line protocol over
stdin/stdout.

Harness -> adversary, once:
    START <kind> <n> <ell>
    CHALLENGE <hex>/<bits>
Adversary -> harness, any number of:
    QA <hex>/<bits>     read A; answered with "0" or "1"
    QB <hex>/<bits>     query B; answered with "0" or "1"
    QD <hex>/<bits>     decode the block with this prefix; answered with a bit
and finally:
    OUT <bit>

A value without ``/<bits>`` is read as 4 bits per hex digit.
"""
import logging
import shlex
import subprocess
from typing import Sequence, Union

import numpy as np

from forrelab.core.bits import bits_to_hex, hex_to_bits
from forrelab.core.errors import AdversaryProtocolError, DomainRangeError
from forrelab.services.oracle_world.handle import OracleHandle

logger = logging.getLogger(__name__)


def format_bits(bits: str) -> str:
    return f"{bits_to_hex(bits) or '0'}/{len(bits)}"


def parse_bits(token: str) -> str:
    text, _, width = token.partition("/")
    try:
        if width:
            return hex_to_bits(text, int(width)) if int(width) else ""
        return hex_to_bits(text)
    except (ValueError, DomainRangeError) as e:
        raise AdversaryProtocolError(f"bad bit-string token {token!r}: {e}") from e


class ExternalAdversary:
    """
    Args:
        command (str | Sequence[str]): program and arguments
        timeout (float): seconds to wait for the process to exit after OUT
    """

    def __init__(self, command: Union[str, Sequence[str]], timeout: float = 30.0):
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout

    def __call__(self, handle: OracleHandle, challenge: str, rng: np.random.Generator) -> int:
        profile = handle.profile
        try:
            proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as e:
            raise AdversaryProtocolError(f"cannot start adversary {self.command}: {e}") from e
        try:
            self._send(proc, f"START {profile.kind.value} {profile.n} {profile.ell}")
            self._send(proc, f"CHALLENGE {format_bits(challenge)}")
            while True:
                line = proc.stdout.readline()
                if not line:
                    raise AdversaryProtocolError("adversary exited without OUT")
                verb, _, arg = line.strip().partition(" ")
                if verb == "OUT":
                    if arg not in ("0", "1"):
                        raise AdversaryProtocolError(f"OUT needs a bit, got {arg!r}")
                    return int(arg)
                if verb == "QA":
                    answer = handle.read_a(parse_bits(arg))
                elif verb == "QB":
                    answer = handle.query_b(parse_bits(arg))
                elif verb == "QD":
                    answer = handle.decode(parse_bits(arg))
                else:
                    raise AdversaryProtocolError(f"unknown adversary message {line.strip()!r}")
                self._send(proc, str(answer))
        finally:
            self._close(proc)

    @staticmethod
    def _send(proc: subprocess.Popen, line: str):
        try:
            proc.stdin.write(line + "\n")
            proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise AdversaryProtocolError(f"adversary closed its input: {e}") from e

    def _close(self, proc: subprocess.Popen):
        for stream in (proc.stdin, proc.stdout):
            try:
                stream.close()
            except OSError:
                pass
        try:
            proc.wait(timeout=self.timeout)
        except subprocess.TimeoutExpired:
            logger.warning(f"Adversary {self.command[0]} did not exit; killing it")
            proc.kill()
            proc.wait()
