import numpy as np
import pytest

from forrelab.core.bits import bits_to_int, int_to_bits
from forrelab.core.errors import DomainRangeError, ShapeMismatchError
from forrelab.core.randomness import make_rng
from forrelab.services.crypto import (
    Ciphertext,
    FakePkDistinguisher,
    Transcript,
    bit_error_bound,
    fake_pk_adversary_wrap,
    gen_error_budget,
    inv_error_budget,
    key_exchange,
    ot_run,
    owf_error_budget,
    owf_eval,
    owf_inputs,
    pke_dec,
    pke_enc,
    pke_error_budget,
    pke_gen,
    pk_collision_probability,
    prf_eval,
    receiver_first_message,
    repetitions_for,
    towf_eval,
    towf_gen,
    towf_inv,
    trivial_inverter,
    union_budget,
)
from forrelab.services.oracle_world import REGION_PK_MAP, OracleHandle, output_bits, sample_trapdoor_world


def plaintext_inverter(world):
    """Inverter that reads I off the world's plaintext."""

    def invert(handle, pk, y, rng):
        x = world.inverse_table(bits_to_int(pk)).get(bits_to_int(y))
        return None if x is None else int_to_bits(x, world.n)

    return invert


class TestBudgets:
    """Hoeffding decode-error accounting"""

    def test_bit_error_bound(self):
        assert bit_error_bound(64, 0.25) == pytest.approx(2 * 2.718281828459045 ** -8)
        assert bit_error_bound(0, 0.25) == 1.0

    def test_union_budget(self):
        assert union_budget(3, 64, 0.25) == pytest.approx(3 * bit_error_bound(64, 0.25))
        assert union_budget(10 ** 6, 1, 0.25) == 1.0

    def test_repetitions_for(self):
        assert repetitions_for(6, 2, 64) == 64
        assert repetitions_for(6, 20, 1) == 131

    def test_budgets_shrink_with_repetitions(self, trapdoor_profile, prf_profile):
        assert gen_error_budget(trapdoor_profile, 200) <= gen_error_budget(trapdoor_profile, 64)
        assert inv_error_budget(trapdoor_profile) < 0.25
        assert owf_error_budget(prf_profile) <= 2.0 ** -prf_profile.n
        assert pke_error_budget(trapdoor_profile) < 1.0


class TestPrf:
    """The keyed function and the one-way function from it"""

    def test_prf_eval_matches_table(self, prf_world):
        handle = OracleHandle(prf_world, seed=3)
        for k, x in ((0, 0), (1, 2), (3, 3)):
            assert prf_eval(handle, int_to_bits(k, 2), int_to_bits(x, 2)) == prf_world.table[k, x]

    def test_prf_eval_shapes(self, prf_world, trapdoor_world):
        with pytest.raises(ShapeMismatchError):
            prf_eval(OracleHandle(prf_world), "0", "00")
        with pytest.raises(ShapeMismatchError):
            prf_eval(OracleHandle(trapdoor_world), "00", "00")

    def test_owf_inputs(self):
        assert owf_inputs(4) == list(range(1, 13))
        assert owf_inputs(2, relaxed_indexing=True) == [1, 2, 3, 0, 1, 2]
        with pytest.raises(DomainRangeError):
            owf_inputs(2)

    def test_owf_eval_relaxed(self, prf_world):
        handle = OracleHandle(prf_world, seed=5)
        expected = "".join(str(prf_world.table[2, x]) for x in owf_inputs(2, relaxed_indexing=True))
        assert owf_eval(handle, "10", relaxed_indexing=True) == expected

    def test_owf_needs_room_for_inputs(self, prf_world):
        with pytest.raises(DomainRangeError):
            owf_eval(OracleHandle(prf_world), "10")


class TestTrapdoorFunction:
    """Gen, Eval and Inv through the decoder"""

    def test_gen_decodes_the_public_key(self, trapdoor_world):
        handle = OracleHandle(trapdoor_world, seed=1)
        keys = towf_gen(handle, seed=4)
        assert keys.pk == int_to_bits(trapdoor_world.g(bits_to_int(keys.td)), trapdoor_world.profile.lam)

    def test_eval(self, trapdoor_world):
        handle = OracleHandle(trapdoor_world, seed=2)
        pk = trapdoor_world.g(3)
        y = towf_eval(handle, int_to_bits(pk, 6), "01")
        assert y == output_bits(trapdoor_world, REGION_PK_MAP, (pk, 1))

    def test_inv_round_trip(self, trapdoor_world):
        handle = OracleHandle(trapdoor_world, seed=3)
        pk = int_to_bits(trapdoor_world.g(2), 6)
        for x in range(4):
            y = towf_eval(handle, pk, int_to_bits(x, 2))
            x_back = towf_inv(handle, "10", y)
            assert x_back == int_to_bits(trapdoor_world.inv(2, bits_to_int(y)), 2)

    def test_inv_undefined(self, trapdoor_world):
        image = trapdoor_world.inverse_table(trapdoor_world.g(0))
        y = next(v for v in range(1 << 12) if v not in image)
        assert towf_inv(OracleHandle(trapdoor_world, seed=4), "00", int_to_bits(y, 12)) is None

    def test_shapes(self, trapdoor_world, prf_world):
        handle = OracleHandle(trapdoor_world)
        with pytest.raises(ShapeMismatchError):
            towf_eval(handle, "0101", "01")
        with pytest.raises(ShapeMismatchError):
            towf_inv(handle, "0", "0" * 12)
        with pytest.raises(ShapeMismatchError):
            towf_gen(OracleHandle(prf_world), seed=0)

    def test_pk_collision_rate_matches_enumeration(self, small_trapdoor_profile):
        worlds = [sample_trapdoor_world(small_trapdoor_profile, seed) for seed in range(200)]
        pks = 1 << small_trapdoor_profile.lam
        colliding = [sum(not world.is_injective(pk) for pk in range(pks)) for world in worlds]
        exact = pk_collision_probability(small_trapdoor_profile)
        assert exact == pytest.approx(1 - (4095 / 4096) * (4094 / 4096) * (4093 / 4096))
        rate = sum(colliding) / (len(worlds) * pks)
        stderr = np.sqrt(exact * (1 - exact) / (len(worlds) * pks))
        assert abs(rate - exact) <= 3 * stderr
        any_collision = 1 - (1 - exact) ** pks
        world_rate = np.mean([c > 0 for c in colliding])
        assert abs(world_rate - any_collision) <= 3 * np.sqrt(any_collision * (1 - any_collision) / len(worlds))


class TestPke:
    """Hardcore-bit encryption and key exchange"""

    def test_decrypts(self, trapdoor_world):
        handle = OracleHandle(trapdoor_world, seed=6)
        keys = pke_gen(handle, seed=9)
        for seed in range(4):
            for b in (0, 1):
                ct = pke_enc(handle, keys.pk, b, seed)
                assert pke_dec(handle, keys.td, ct) == b

    def test_plaintext_must_be_a_bit(self, trapdoor_world):
        with pytest.raises(DomainRangeError):
            pke_enc(OracleHandle(trapdoor_world), "0" * 6, 2, 0)

    def test_ciphertext_bits(self):
        ct = Ciphertext(y="1" * 12, r="01", c=1)
        assert Ciphertext.from_bits(ct.to_bits(), 12, 2) == ct
        with pytest.raises(ShapeMismatchError):
            Ciphertext.from_bits("0101", 12, 2)

    def test_key_exchange(self, trapdoor_world):
        result = key_exchange(OracleHandle(trapdoor_world, seed=7), seed=13)
        assert result.agreed
        assert len(result.alice_key) == 2
        assert [m.role for m in result.transcript.messages] == ["alice", "bob", "bob"]
        honest = {int_to_bits(trapdoor_world.g(td), 6) for td in range(4)}
        assert result.transcript.messages[0].bits in honest
        assert 0.0 < result.error_budget < 1.0

    def test_transcript_bytes(self, trapdoor_world):
        transcript = key_exchange(OracleHandle(trapdoor_world, seed=7), seed=13).transcript
        assert Transcript.from_bytes(transcript.to_bytes()) == transcript
        assert "alice" in transcript.format_hex()

    def test_truncated_transcript(self):
        transcript = Transcript()
        transcript.add("alice", "pk", "101100")
        with pytest.raises(ShapeMismatchError):
            Transcript.from_bytes(transcript.to_bytes()[:-1])


class TestObliviousTransfer:
    """Semi-honest OT from pseudorandom public keys"""

    @pytest.mark.parametrize("x0,x1,y", [(0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)])
    def test_correct(self, trapdoor_world, x0, x1, y):
        run = ot_run(OracleHandle(trapdoor_world, seed=11), x0, x1, y, seed=17)
        assert run.correct
        assert run.z == (x1 if y else x0)

    def test_chosen_key_is_honest(self, trapdoor_world):
        run = ot_run(OracleHandle(trapdoor_world, seed=11), 1, 0, 1, seed=5)
        pk0, pk1 = run.public_keys()
        honest = {int_to_bits(trapdoor_world.g(td), 6) for td in range(4)}
        assert pk1 in honest
        assert len(pk0) == len(pk1) == 6

    def test_sender_view_hides_the_choice(self, trapdoor_world):
        view = ot_run(OracleHandle(trapdoor_world, seed=11), 0, 0, 1, seed=5).sender_view()
        assert set(view) == {"x0", "x1", "sender_seed", "pk0", "pk1"}

    def test_public_keys_are_uniform(self, trapdoor_profile):
        runs = 256
        halves = {0: [], 1: []}
        for seed in range(runs):
            world = sample_trapdoor_world(trapdoor_profile, 1000 + seed)
            first, _ = receiver_first_message(OracleHandle(world, seed=seed), seed % 2, seed=seed)
            halves[0].append(bits_to_int(first[:6]))
            halves[1].append(bits_to_int(first[6:]))
        expected = runs / 8
        for values in halves.values():
            values = np.asarray(values)
            for bins in (values >> 3, values & 7):
                observed = np.bincount(bins, minlength=8)
                chi2 = float(np.sum((observed - expected) ** 2 / expected))
                # 7 degrees of freedom, p = 0.001
                assert chi2 < 24.32

    def test_runs_are_reproducible(self, trapdoor_world):
        first = ot_run(OracleHandle(trapdoor_world, seed=11), 1, 0, 1, seed=23)
        second = ot_run(OracleHandle(trapdoor_world, seed=11), 1, 0, 1, seed=23)
        assert first.transcript.to_bytes() == second.transcript.to_bytes()
        assert first.z == second.z

    def test_honest_key_does_not_depend_on_decoder_randomness(self, trapdoor_world):
        messages = [receiver_first_message(OracleHandle(trapdoor_world, seed=s), 0, seed=31) for s in (1, 2, 3)]
        assert len({td for _, td in messages}) == 1
        td = bits_to_int(messages[0][1])
        for first, _ in messages:
            assert first[:6] == int_to_bits(trapdoor_world.g(td), 6)
        assert len({first[6:] for first, _ in messages}) == 1

    def test_choice_must_be_a_bit(self, trapdoor_world):
        with pytest.raises(DomainRangeError):
            receiver_first_message(OracleHandle(trapdoor_world), 2, seed=0)


class TestFakePk:
    """Inverter to public-key distinguisher"""

    def test_plaintext_inverter_accepts_real_keys(self, trapdoor_world):
        distinguisher = fake_pk_adversary_wrap(plaintext_inverter(trapdoor_world))
        handle = OracleHandle(trapdoor_world, seed=2)
        rng = make_rng(0)
        for td in range(4):
            assert distinguisher(handle, int_to_bits(trapdoor_world.g(td), 6), rng) == 1
        assert distinguisher.inverter_calls == 4

    def test_bad_answers_reject(self, trapdoor_world):
        handle = OracleHandle(trapdoor_world, seed=2)
        pk = int_to_bits(trapdoor_world.g(0), 6)
        for answer in (None, "1", "2x"):
            distinguisher = FakePkDistinguisher(lambda h, p, y, r, a=answer: a)
            assert distinguisher(handle, pk, make_rng(1)) == 0

    def test_trivial_inverter(self, trapdoor_world):
        handle = OracleHandle(trapdoor_world)
        assert trivial_inverter(handle, "0" * 6, "0" * 12, make_rng(0)) == "00"
