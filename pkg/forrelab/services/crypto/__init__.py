"""
Constructions over oracle worlds: PRF and one-way function (PRF worlds),
trapdoor function, PKE, key exchange and oblivious transfer (trapdoor worlds).

Every construction sees the world only through an OracleHandle.
"""

from .budget import bit_error_bound, repetitions_for, union_budget
from .prf import owf_error_budget, owf_eval, owf_inputs, prf_eval
from .trapdoor import (
    TrapdoorKeys,
    eval_error_budget,
    gen_error_budget,
    inv_error_budget,
    pk_collision_probability,
    towf_eval,
    towf_gen,
    towf_inv,
)
from .transcript import Transcript, TranscriptMessage
from .pke import Ciphertext, KeyExchangeResult, key_exchange, pke_dec, pke_enc, pke_error_budget, pke_gen
from .ot import OtTranscript, ot_run, receiver_first_message, receiver_output, sender_message
from .fake_pk import (
    FakePkDistinguisher,
    Inverter,
    fake_pk_adversary_wrap,
    random_guess_inverter,
    trivial_inverter,
)

__all__ = [
    "bit_error_bound",
    "repetitions_for",
    "union_budget",
    "prf_eval",
    "owf_eval",
    "owf_inputs",
    "owf_error_budget",
    "TrapdoorKeys",
    "towf_gen",
    "towf_eval",
    "towf_inv",
    "gen_error_budget",
    "eval_error_budget",
    "inv_error_budget",
    "pk_collision_probability",
    "Transcript",
    "TranscriptMessage",
    "Ciphertext",
    "KeyExchangeResult",
    "pke_gen",
    "pke_enc",
    "pke_dec",
    "pke_error_budget",
    "key_exchange",
    "OtTranscript",
    "ot_run",
    "receiver_first_message",
    "sender_message",
    "receiver_output",
    "Inverter",
    "FakePkDistinguisher",
    "fake_pk_adversary_wrap",
    "trivial_inverter",
    "random_guess_inverter",
]
