import os

import pytest

from tourprof.core import (BlowupSpec, blowup, random_tournament, transitive)
from tourprof.profiles import FlipState
from tourprof.search import (DEFAULT_GAMMAS, AnnealSchedule, anneal,
                             boundary_scan, objective)


def test_objective_examples():
    assert objective(transitive(20), gamma=0.0, penalty=7.0) == 0.0
    t = random_tournament(600, seed=1)
    assert objective(t, gamma=0.25, penalty=10.0) == pytest.approx(3 / 8, abs=0.02)
    b = blowup(BlowupSpec(transitive(2), (0.5, 0.5)), 600, seed=2)
    assert objective(b, gamma=1 / 16, penalty=10.0) == pytest.approx(3 / 64, abs=0.01)


def test_objective_accepts_flip_state():
    t = random_tournament(30, seed=4)
    assert objective(FlipState(t), 0.1, 5.0) == objective(t, 0.1, 5.0)
    with pytest.raises(TypeError):
        objective("nope", 0.1)


def test_schedule_validation():
    with pytest.raises(ValueError):
        AnnealSchedule(moves=0)
    with pytest.raises(ValueError):
        AnnealSchedule(cool=1.5)
    with pytest.raises(ValueError):
        AnnealSchedule(audit_every=0)


def test_anneal_determinism_and_improvement():
    sched = AnnealSchedule(moves=4000, warmup=200)
    a = anneal(16, 1 / 16, seed=3, schedule=sched)
    b = anneal(16, 1 / 16, seed=3, schedule=sched)
    assert a.tournament == b.tournament
    assert a.objective == b.objective
    assert a.objective <= a.initial_objective + 1e-12
    assert a.accepted <= a.proposed == 4000
    assert a.temperature0 > 0


def test_anneal_validation():
    with pytest.raises(ValueError):
        anneal(6, 0.1, seed=0)
    with pytest.raises(ValueError):
        anneal(16, 0.5, seed=0)
    with pytest.raises(ValueError):
        anneal(16, 0.1, seed=0, penalty=-1)


def test_anneal_seed_changes_outcome():
    sched = AnnealSchedule(moves=2000, warmup=100)
    a = anneal(16, 0.1, seed=0, schedule=sched)
    b = anneal(16, 0.1, seed=1, schedule=sched)
    assert a.tournament != b.tournament


def test_boundary_scan_rows_sorted_and_flag_logic():
    sched = AnnealSchedule(moves=3000, warmup=150)
    pts = boundary_scan(gammas=(0.25, 1 / 16), n=16, seeds=(1, 0),
                        schedule=sched, max_workers=1)
    assert [(p.gamma, p.seed) for p in pts] == \
        sorted((g, s) for g in (1 / 16, 0.25) for s in (0, 1))
    for p in pts:
        assert p.conjectured_c4 > 0
        assert p.discovery == (p.c4 < p.conjectured_c4 - 0.01)


def test_boundary_scan_empty_and_invalid():
    assert boundary_scan(gammas=(), n=16) == []
    with pytest.raises(ValueError):
        boundary_scan(gammas=(0.3,), n=16)
    with pytest.raises(ValueError):
        boundary_scan(gammas=(0.1,), n=16, seeds=0)


def test_boundary_scan_threads_match_serial():
    sched = AnnealSchedule(moves=1500, warmup=100)
    serial = boundary_scan(gammas=(0.1,), n=16, seeds=(0, 1),
                           schedule=sched, max_workers=1)
    threaded = boundary_scan(gammas=(0.1,), n=16, seeds=(0, 1),
                             schedule=sched, max_workers=2)
    assert [(p.c3, p.c4) for p in serial] == [(p.c3, p.c4) for p in threaded]


def test_threads_env_is_read(monkeypatch):
    from tourprof import search as mod
    monkeypatch.setenv(mod.THREADS_ENV, "1")
    sched = AnnealSchedule(moves=800, warmup=50)
    pts = boundary_scan(gammas=(0.1,), n=16, seeds=1, schedule=sched)
    assert len(pts) == 1


def test_default_gammas_are_the_kink_and_endpoint():
    assert DEFAULT_GAMMAS == (1 / 16, 0.25)
