"""Whole-system analysis report used by the command line."""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .adjunction import EUCLIDEAN, AdjSystem, AdjunctionError, GluedSpace, component_graph
from .hausdorff import hajicek_check, uniqueness_experiment, y_graph_dot, y_pairs


@dataclass
class AnalysisReport:
    system: str
    valid: bool
    backend: str = EUCLIDEAN
    violations: list = field(default_factory=list)
    hausdorff: bool | None = None
    y_family: dict | None = None
    y_pair_count: int | None = None
    component_edges: list = field(default_factory=list)
    connected: bool | None = None
    t1: bool | None = None
    embeddings: list = field(default_factory=list)
    uniqueness: list | None = None
    notes: list = field(default_factory=list)
    truncated_counterexample: bool = False

    def check_consistency(self) -> None:
        if self.hausdorff is not None:
            empty = not (self.y_family.get("entries") or self.y_family.get("pairs"))
            # finite spaces can also fail to separate comparable points, which Y omits
            if self.backend == EUCLIDEAN:
                assert self.hausdorff == empty, "Hausdorff verdict disagrees with the Y family"
            else:
                assert empty or not self.hausdorff, "Y-pairs in a Hausdorff space"
        if self.hausdorff:
            assert self.t1, "Hausdorff without T1"

    def to_json(self) -> dict:
        out = {"system": self.system, "backend": self.backend, "valid": self.valid,
               "violations": self.violations, "hausdorff": self.hausdorff, "y_family": self.y_family,
               "y_pair_count": self.y_pair_count,
               "component_graph": self.component_edges, "connected": self.connected, "t1": self.t1,
               "embeddings": self.embeddings, "notes": self.notes}
        if self.uniqueness is not None:
            out["uniqueness"] = self.uniqueness
        if self.truncated_counterexample:
            out["truncated_counterexample"] = True
        return out

    def lines(self) -> list[str]:
        if not self.valid:
            return [f"system: {self.system}", "valid: false"] + [f"  {v}" for v in self.violations]
        out = [f"system: {self.system}", "valid: true"]

        def fmt(v):
            return "undetermined" if v is None else str(v).lower()

        out.append(f"Hausdorff: {fmt(self.hausdorff)}")
        if self.y_pair_count is not None:
            out.append(f"Y-pairs: {self.y_pair_count}")
        elif self.y_family is not None:
            out.append(f"Y-pair families: {len(self.y_family.get('entries', []))}")
        out.append(f"connected: {fmt(self.connected)}")
        out.append(f"T1: {fmt(self.t1)}")
        edges = ", ".join(f"{a}-{b}" for a, b in self.component_edges) or "none"
        out.append(f"component graph edges: {edges}")
        for e in self.embeddings:
            out.append(f"canonical image {e['component']}: H-submanifold {fmt(e.get('is_h_submanifold'))}, "
                       f"boundary = Y-set {fmt(e.get('boundary_eq_y'))}")
        if self.uniqueness is not None:
            out.append(f"uniqueness experiment: {len(self.uniqueness)} set(s)")
        out.extend(f"note: {n}" for n in self.notes)
        return out


def analyze(sys: AdjSystem, uniqueness_grid=None) -> AnalysisReport:
    from .hausdorff import boundary_eq_y_check

    report = AnalysisReport(system=sys.name or "system", valid=sys.validate().ok, backend=sys.backend)
    if not report.valid:
        report.violations = [v.show(sys.labels) for v in sys.validate().violations]
        return report
    space = GluedSpace(sys)
    labels = sys.labels
    report.component_edges = sorted((labels[a], labels[b]) for a, b in component_graph(sys).edges())
    report.t1 = space.is_T1()
    if (sys.name or "").startswith("N_truncated"):
        report.truncated_counterexample = True
        report.notes.append("finite truncation: the union of gluing-region images is not an "
                            "H-submanifold, unlike the infinite system")
    try:
        fam = y_pairs(space)
        report.y_family = fam.to_json()
        report.hausdorff = fam.is_empty() if sys.backend == EUCLIDEAN else space.quotient.is_hausdorff()
        try:
            report.y_pair_count = len(fam.point_pairs())
        except AdjunctionError:
            report.y_pair_count = None
        report.connected = space.is_connected()
        for i in range(space.m):
            v = space.canonical_image(i)
            h = hajicek_check(space, v)
            report.embeddings.append({"component": labels[i], "is_h_submanifold": h.is_h_submanifold,
                                      "boundary_eq_y": boundary_eq_y_check(space, v)})
        if uniqueness_grid is not None:
            found = uniqueness_experiment(space, uniqueness_grid or None)
            report.uniqueness = [v.to_json() for v in found]
    except AdjunctionError as exc:
        report.notes.append(f"not decided: {exc}")
        if report.connected is None and sys.backend != EUCLIDEAN:
            report.connected = space.is_connected()
    report.check_consistency()
    return report


def component_graph_dot(sys: AdjSystem) -> str:
    g = component_graph(sys)
    lines = ["graph C {"]
    for n in g.nodes:
        lines.append(f'  "{sys.labels[n]}";')
    for a, b in g.edges:
        lines.append(f'  "{sys.labels[a]}" -- "{sys.labels[b]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def y_dot(sys: AdjSystem) -> str:
    return y_graph_dot(GluedSpace(sys))


def is_complete(sys: AdjSystem) -> bool:
    g = component_graph(sys)
    return nx.density(g) == 1 if g.number_of_nodes() > 1 else True
