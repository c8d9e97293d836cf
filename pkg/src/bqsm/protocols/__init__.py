"""Protocol state machines for oblivious transfer and bit commitment."""

from .commitment import COMMIT_RUNNERS, CommitSession, run_comm, run_comm_prime, run_epr_comm
from .ot import OT_RUNNERS, run_bb84_epr_qot, run_bb84_qot, run_epr_qot, run_qot
from .parties import (
    Announcement,
    Committer,
    HonestCommitter,
    HonestReceiver,
    OtOutputs,
    PartyView,
    Receiver,
)
from .transcript import Message, Transcript

__all__ = [
    "Announcement",
    "COMMIT_RUNNERS",
    "CommitSession",
    "Committer",
    "HonestCommitter",
    "HonestReceiver",
    "Message",
    "OT_RUNNERS",
    "OtOutputs",
    "PartyView",
    "Receiver",
    "Transcript",
    "run_bb84_epr_qot",
    "run_bb84_qot",
    "run_comm",
    "run_comm_prime",
    "run_epr_comm",
    "run_epr_qot",
    "run_qot",
]
