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

import logging
import os

SIZE_ENV = ["OMPI_COMM_WORLD_SIZE", "PMI_SIZE", "MV2_COMM_WORLD_SIZE"]
RANK_ENV = ["OMPI_COMM_WORLD_RANK", "PMI_RANK", "MV2_COMM_WORLD_RANK"]


def env2int(env_list, default=-1):
    for e in env_list:
        try:
            val = int(os.environ.get(e, -1))
        except ValueError:
            continue
        if val >= 0:
            return val
    return default


def mpi_discovery(verbose=False):
    """
    Discover an MPI world via mpi4py; None when not launched under MPI
    or when mpi4py is not installed.
    """
    if env2int(SIZE_ENV, 1) <= 1:
        return None
    try:
        from mpi4py import MPI
    except ImportError:
        logging.warning("MPI launch detected but mpi4py is not installed; running locally")
        return None

    comm = MPI.COMM_WORLD
    if verbose:
        logging.info(
            f"MPI world : rank {comm.Get_rank()} of {comm.Get_size()} "
            f"on {MPI.Get_processor_name()}"
        )
    return comm


class TrialComm:
    """Round-robin distribution of independent trials over MPI ranks.

    Trial k runs on rank k % size; results are allgathered and merged by
    trial index, so the merged list is the one a single process produces.
    """

    def __init__(self, mpi_comm=None):
        self.mpi_comm = mpi_comm
        if mpi_comm is None:
            self.rank, self.size = 0, 1
        else:
            self.rank, self.size = mpi_comm.Get_rank(), mpi_comm.Get_size()

    @classmethod
    def discover(cls, verbose=False):
        return cls(mpi_discovery(verbose))

    @property
    def is_root(self):
        return self.rank == 0

    def local_trials(self, trials):
        return range(self.rank, trials, self.size)

    def map_trials(self, fn, trials):
        local = [(k, fn(k)) for k in self.local_trials(trials)]
        if self.size == 1:
            return [r for _, r in local]
        gathered = self.mpi_comm.allgather(local)
        merged = {}
        for part in gathered:
            merged.update(part)
        assert len(merged) == trials, f"gathered {len(merged)} of {trials} trials"
        return [merged[k] for k in range(trials)]


LOCAL = TrialComm()
