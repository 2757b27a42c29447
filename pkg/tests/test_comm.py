# Copyright 2026, The triple-lab authors. All rights reserved.
#
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


from triplelab.comm import LOCAL, RANK_ENV, SIZE_ENV, TrialComm, env2int, mpi_discovery


class FakeWorld:
    """Two ranks whose allgather returns the work of both."""

    def __init__(self, rank, fn, trials):
        self.rank, self.fn, self.trials = rank, fn, trials

    def Get_rank(self):
        return self.rank

    def Get_size(self):
        return 2

    def allgather(self, local):
        return [[(k, self.fn(k)) for k in range(r, self.trials, 2)] for r in range(2)]


def test_env2int(monkeypatch):
    for name in SIZE_ENV + RANK_ENV:
        monkeypatch.delenv(name, raising=False)
    assert env2int(SIZE_ENV) == -1
    assert env2int(SIZE_ENV, 1) == 1
    monkeypatch.setenv("PMI_SIZE", "4")
    assert env2int(SIZE_ENV) == 4
    monkeypatch.setenv("OMPI_COMM_WORLD_SIZE", "garbage")
    assert env2int(SIZE_ENV) == 4


def test_local_discovery(monkeypatch):
    for name in SIZE_ENV:
        monkeypatch.delenv(name, raising=False)
    assert mpi_discovery() is None
    comm = TrialComm.discover()
    assert comm.is_root and comm.size == 1


def test_local_map_keeps_trial_order():
    assert LOCAL.map_trials(lambda k: k * k, 5) == [0, 1, 4, 9, 16]
    assert list(LOCAL.local_trials(3)) == [0, 1, 2]


def test_round_robin_merge_matches_a_single_process():
    fn = lambda k: (k, -k)
    for rank in range(2):
        comm = TrialComm(FakeWorld(rank, fn, 7))
        assert list(comm.local_trials(7)) == list(range(rank, 7, 2))
        assert comm.map_trials(fn, 7) == LOCAL.map_trials(fn, 7)
    assert not TrialComm(FakeWorld(1, fn, 7)).is_root
