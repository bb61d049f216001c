import pytest

from mica.adapters import ScriptedPerceiver
from mica.dialogue.events import EventKind
from mica.monitor import (AlertLimiter, Judgment, Observation, ProgressState,
                          advance_progress, emit_alerts, judge,
                          parse_observation_reply, tick)


def make_obs(step=None, action="", tick_id=1, degraded=False):
    return Observation(tick_id=tick_id, timestamp=2.0 * tick_id, action=action,
                       matched_step=step, degraded=degraded)


def progress(current=0, completed=(), skipped=()):
    return ProgressState(current_step=current, completed_steps=tuple(completed),
                         skipped_steps=frozenset(skipped))


# -- tick --

def test_scripted_perceiver_fields_verbatim():
    perceiver = ScriptedPerceiver([(0.0, {
        "action": "stirring the sauce", "step": 5,
        "items": ["pan", "spoon"], "sounds": ["sizzling"]})])
    perceiver.set_time(2.0)
    obs = tick(1, 2.0, [], [], perceiver)
    assert obs.action == "stirring the sauce"
    assert obs.matched_step == 5
    assert obs.visible_items == ("pan", "spoon")
    assert obs.sounds == ("sizzling",)
    assert not obs.degraded


def test_perceiver_failure_degrades_not_skips():
    perceiver = ScriptedPerceiver([(0.0, {"action": "x", "step": 1})])
    perceiver.fail_at = {3}
    observations = []
    for i in range(1, 6):
        perceiver.set_time(2.0 * i)
        observations.append(tick(i, 2.0 * i, [], [], perceiver))
    assert [o.tick_id for o in observations] == [1, 2, 3, 4, 5]
    assert [o.degraded for o in observations] == [False, False, True, False, False]


def test_unparseable_reply_degrades():
    obs = parse_observation_reply("total nonsense with no fields", 4, 8.0)
    assert obs.degraded
    assert obs.raw_descriptor == "total nonsense with no fields"


def test_non_integer_step_degrades():
    obs = parse_observation_reply("action: x\nstep: soon\nitems:\nsounds:", 1, 2.0)
    assert obs.degraded


def test_empty_scene_before_first_payload():
    perceiver = ScriptedPerceiver([(10.0, {"action": "later"})])
    perceiver.set_time(2.0)
    obs = tick(1, 2.0, [], [], perceiver)
    assert obs.action == ""
    assert obs.matched_step is None


# -- judge --

def test_nothing_skipped_no_missed(pasta):
    j = judge(make_obs(step=2, action="adding salt to the boiling water"),
              pasta, progress(current=2, completed=[0, 1]), judgment_id=1)
    assert j.relevant and j.correct
    assert j.missed_steps == ()


def brute_force_missed(matched, completed, skipped, n_steps):
    return tuple(s for s in range(n_steps)
                 if s < matched and s not in completed and s not in skipped)


def test_missed_step_set_difference_oracle(pasta):
    j = judge(make_obs(step=3, action="boil the pasta"), pasta,
              progress(current=2, completed=[0, 1]), judgment_id=1)
    assert j.missed_steps == brute_force_missed(3, {0, 1}, set(), len(pasta.steps))
    assert j.missed_steps == (2,)


def test_declared_skip_suppresses_missed(pasta):
    j = judge(make_obs(step=2, action="adding salt"), pasta,
              progress(current=2, completed=[0, 1], skipped=[2]), judgment_id=1)
    assert j.missed_steps == brute_force_missed(2, {0, 1}, {2}, len(pasta.steps))
    assert j.missed_steps == ()


def test_irrelevant_observation(pasta):
    j = judge(make_obs(step=None, action="scrolling a phone"), pasta,
              progress(), judgment_id=1)
    assert not j.relevant
    assert j.correct is None


def test_incorrect_action_detected(pasta):
    j = judge(make_obs(step=2, action="zzqx unrelated motion"), pasta,
              progress(current=2, completed=[0, 1]), judgment_id=1)
    assert j.relevant
    assert j.correct is False


def test_degraded_observation_is_irrelevant(pasta):
    j = judge(make_obs(step=2, action="adding salt", degraded=True), pasta,
              progress(), judgment_id=1)
    assert not j.relevant


def test_judgment_forbids_correct_when_irrelevant():
    with pytest.raises(ValueError):
        Judgment(judgment_id=1, tick_id=1, relevant=False, correct=True)


# -- emit_alerts --

def test_missed_steps_emit_e5():
    j = Judgment(judgment_id=1, tick_id=1, relevant=True, correct=True,
                 missed_steps=(2,))
    events = emit_alerts(j)
    assert [e.kind for e in events] == [EventKind.E5_MISSED_STEP]
    assert events[0].judgment_id == 1


def test_healthy_judgment_emits_nothing():
    j = Judgment(judgment_id=1, tick_id=1, relevant=True, correct=True)
    assert emit_alerts(j) == []


def test_both_alerts_ordered_e5_first():
    j = Judgment(judgment_id=1, tick_id=1, relevant=True, correct=False,
                 missed_steps=(2,))
    kinds = [e.kind for e in emit_alerts(j)]
    assert kinds == [EventKind.E5_MISSED_STEP, EventKind.E6_INCORRECT_STEP]


def test_cooldown_suppresses_identical_alerts():
    limiter = AlertLimiter(cooldown=30.0)
    j = Judgment(judgment_id=1, tick_id=1, relevant=True, correct=True,
                 missed_steps=(2,))
    assert len(emit_alerts(j, now=0.0, limiter=limiter)) == 1
    assert emit_alerts(j, now=10.0, limiter=limiter) == []
    assert len(emit_alerts(j, now=31.0, limiter=limiter)) == 1


def test_cooldown_tracks_distinct_steps():
    limiter = AlertLimiter(cooldown=30.0)
    a = Judgment(judgment_id=1, tick_id=1, relevant=True, correct=True, missed_steps=(1,))
    b = Judgment(judgment_id=2, tick_id=2, relevant=True, correct=True, missed_steps=(2,))
    assert len(emit_alerts(a, now=0.0, limiter=limiter)) == 1
    assert len(emit_alerts(b, now=2.0, limiter=limiter)) == 1


# -- advance_progress --

def test_direct_advance():
    p = advance_progress(Judgment(1, 1, True, True, advanced_to=2),
                         progress(current=1, completed=[0]))
    assert p.current_step == 2
    assert p.completed_steps == (0, 1)


def test_absent_advancement_is_identity():
    before = progress(current=1, completed=[0])
    assert advance_progress(Judgment(1, 1, True, True), before) == before


def test_out_of_range_advancement_rejected():
    before = progress(current=1, completed=[0])
    after = advance_progress(Judgment(1, 1, True, True, advanced_to=9),
                             before, n_steps=7)
    assert after == before


def test_backwards_advancement_rejected():
    before = progress(current=3, completed=[0, 1, 2])
    after = advance_progress(Judgment(1, 1, True, True, advanced_to=2), before)
    assert after == before


def test_fold_over_scripted_judgments():
    judgments = [Judgment(i, i, True, True, advanced_to=i) for i in (1, 2, 3)]
    p = progress()
    for j in judgments:
        p = advance_progress(j, p)
    assert p.current_step == 3
    assert p.completed_steps == (0, 1, 2)


def test_progress_is_monotone_under_random_judgments(pasta):
    import random

    rng = random.Random(3)
    p = progress()
    seen_current = [p.current_step]
    for i in range(50):
        advanced = rng.choice([None, rng.randrange(0, 9)])
        j = Judgment(i, i, True, True, advanced_to=advanced)
        p = advance_progress(j, p, n_steps=len(pasta.steps))
        assert p.current_step >= seen_current[-1]
        seen_current.append(p.current_step)
        assert set(p.completed_steps) <= set(range(len(pasta.steps)))
        assert p.current_step not in p.completed_steps
