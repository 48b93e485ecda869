from dataclasses import dataclass
from typing import List


@dataclass
class CommunityAssignment:
    """A cover: a list of (possibly overlapping) vertex sets."""
    communities: List[frozenset]
    source: str = 'detected'
    empty_count: int = 0

    def __len__(self):
        return len(self.communities)

    @classmethod
    def from_sets(cls, sets, source='detected'):
        communities = [frozenset(s) for s in sets]
        nonempty = [c for c in communities if c]
        return cls(nonempty, source, len(communities) - len(nonempty))

    def vertices(self):
        covered = set()
        for community in self.communities:
            covered |= community
        return covered

    def memberships(self):
        """Map each covered vertex to the indices of its communities."""
        member_of = {}
        for i, community in enumerate(self.communities):
            for v in community:
                member_of.setdefault(v, []).append(i)
        return member_of
