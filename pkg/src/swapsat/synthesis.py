"""Incremental synthesis loop, model decoding, and circuit reconstruction.

synthesize() grows the step encoding until the instance is satisfiable under
the "nothing delayed" assumption; the first satisfiable step count is the
minimal number of inserted SWAP/bridge actions, with the preceding UNSAT
answers as the optimality certificate.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .circuit import Circuit, CnotSlice, Gate, circuit_depth, extract_cnot_slice
from .coupling import CouplingGraph
from .dag import DepDag, build_dependency_dag, build_relaxed_dag
from .encoder import EncodeOptions, TwoWayEncoder
from .solver import Status, make_solver


class SynthesisError(RuntimeError):
    """Internal inconsistency while decoding or reconstructing."""


@dataclass(frozen=True)
class Swap:
    p: int
    q: int


@dataclass(frozen=True)
class Bridge:
    cnot_id: int
    control_phys: int
    middle_phys: int
    data_phys: int


@dataclass(frozen=True)
class PlanStep:
    action: Swap | Bridge | None  # None only at step 0
    cnots: tuple[int, ...]  # cnot ids in emission order


@dataclass(frozen=True)
class Plan:
    initial_map: tuple[int, ...]  # logical -> physical
    steps: tuple[PlanStep, ...]
    final_map: tuple[int, ...]

    @property
    def swaps(self) -> int:
        return sum(1 for s in self.steps if isinstance(s.action, Swap))

    @property
    def bridges(self) -> int:
        return sum(1 for s in self.steps if isinstance(s.action, Bridge))


@dataclass(frozen=True)
class Limits:
    time_limit: float | None = None  # total wall-clock budget in seconds
    max_steps: int | None = None


@dataclass
class MappedResult:
    plan: Plan | None
    mapped_circuit: Circuit | None
    metrics: dict


def plan_to_dict(plan: Plan) -> dict:
    steps = []
    for s in plan.steps:
        if isinstance(s.action, Swap):
            action = {"type": "swap", "p": s.action.p, "q": s.action.q}
        elif isinstance(s.action, Bridge):
            action = {"type": "bridge", "cnot": s.action.cnot_id,
                      "control": s.action.control_phys,
                      "middle": s.action.middle_phys, "data": s.action.data_phys}
        else:
            action = None
        steps.append({"action": action, "cnots": list(s.cnots)})
    return {"initial_map": list(plan.initial_map), "steps": steps,
            "final_map": list(plan.final_map)}


def plan_from_dict(data: dict) -> Plan:
    steps = []
    for s in data["steps"]:
        a = s["action"]
        if a is None:
            action = None
        elif a["type"] == "swap":
            action = Swap(a["p"], a["q"])
        elif a["type"] == "bridge":
            action = Bridge(a["cnot"], a["control"], a["middle"], a["data"])
        else:
            raise ValueError(f"unknown plan action {a!r}")
        steps.append(PlanStep(action, tuple(s["cnots"])))
    return Plan(tuple(data["initial_map"]), tuple(steps), tuple(data["final_map"]))


def _apply_swap(mapping: list[int], p: int, q: int) -> None:
    for l, phys in enumerate(mapping):
        if phys == p:
            mapping[l] = q
        elif phys == q:
            mapping[l] = p


def _step_order(dag: DepDag, cnots: set[int]) -> tuple[int, ...]:
    """Topological order of the step-induced sub-DAG, ties by smallest id."""
    import heapq

    indeg = {i: sum(1 for j in dag.pre[i] if j in cnots) for i in cnots}
    ready = [i for i in cnots if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for j in dag.suc[i]:
            if j in cnots:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(ready, j)
    if len(order) != len(cnots):
        raise SynthesisError("step CNOT group is not DAG-consistent")
    return tuple(order)


def decode_model(model: list[bool], encoder: TwoWayEncoder, t_final: int) -> Plan:
    reg = encoder.reg
    n_l, n_p = encoder.n_l, encoder.n_p
    slice_ = encoder.slice

    def mapping_at(t: int) -> list[int]:
        mapping = [-1] * n_l
        for l in range(n_l):
            hits = [p for p in range(n_p) if model[reg.map_var[(l, p, t)]]]
            if len(hits) != 1:
                raise SynthesisError(f"logical {l} mapped to {len(hits)} places at t={t}")
            mapping[l] = hits[0]
        if len(set(mapping)) != n_l:
            raise SynthesisError(f"mapping at t={t} is not injective")
        return mapping

    initial = mapping_at(0)
    mapping = list(initial)
    steps = []
    for t in range(t_final + 1):
        group = {i for i in range(encoder.m) if model[reg.cnot[(i, t)]]}
        action: Swap | Bridge | None = None
        if t >= 1:
            swaps_true = [e for e in encoder.edges if model[reg.swap[(e, t)]]]
            bridges_true = [i for i in encoder.bridgeable if model[reg.bridge[(i, t)]]]
            if len(swaps_true) + len(bridges_true) != 1:
                raise SynthesisError(f"step {t} has {len(swaps_true)} swaps and "
                                     f"{len(bridges_true)} bridges in the model")
            if swaps_true:
                p, q = swaps_true[0]
                action = Swap(p, q)
                _apply_swap(mapping, p, q)
            else:
                i = bridges_true[0]
                c, d = slice_.pair(i)
                pc, pd = mapping[c], mapping[d]
                key = (min(pc, pd), max(pc, pd))
                middles = encoder.bridge_paths.middles.get(key)
                if not middles:
                    raise SynthesisError(f"bridge at step {t} on non-distance-2 pair {key}")
                action = Bridge(i, pc, middles[0], pd)
        steps.append(PlanStep(action, _step_order(encoder.dag, group)))
        # sanity: model mapping agrees with the replayed one
        if mapping_at(t) != mapping:
            raise SynthesisError(f"mapping replay diverges from model at t={t}")

    seen = [i for s in steps for i in s.cnots]
    if sorted(seen) != list(range(encoder.m)):
        raise SynthesisError("each CNOT must be scheduled in exactly one step")
    return Plan(tuple(initial), tuple(steps), tuple(mapping))


def _unary_attachment(circuit: Circuit, slice_: CnotSlice, emission: list[int],
                      relaxed: bool) -> dict:
    """For each non-slice gate index: the first emitted cnot id depending on it.

    Strict mode follows the per-qubit order of the original gate list; relaxed
    mode follows commutation obstructions, so a unary gate never lands before
    a reordered CNOT it does not commute with.  Gates nothing depends on map
    to None (emitted at the end).
    """
    pos = {cid: k for k, cid in enumerate(emission)}
    id_of = {src: i for i, (_c, _d, src) in enumerate(slice_.cnots)}
    # earliest[g]: min emission position over slice gates reachable from gate g
    earliest: dict[int, int | None] = {}
    if relaxed:
        from .dag import obstruction_successors

        suc_list = obstruction_successors(circuit)
        suc = {g.index: suc_list[g.index] for g in circuit.gates}
    else:
        suc = {g.index: set() for g in circuit.gates}
        frontier: dict[int, set[int]] = {q: set() for q in range(circuit.num_qubits)}
        for g in circuit.gates:
            for q in g.qubits:
                for p in frontier[q]:
                    suc[p].add(g.index)
                frontier[q] = {g.index}
    for g in reversed(circuit.gates):
        best = pos[id_of[g.index]] if g.index in id_of else None
        for nxt in suc[g.index]:
            e = earliest[nxt]
            if e is not None and (best is None or e < best):
                best = e
        earliest[g.index] = best
    result = {}
    for g in circuit.gates:
        if g.index not in id_of and g.name not in ("measure", "barrier"):
            e = earliest[g.index]
            result[g.index] = emission[e] if e is not None else None
    return result


def reconstruct(plan: Plan, circuit: Circuit, dag: DepDag, num_physical: int) -> Circuit:
    slice_ = extract_cnot_slice(circuit)
    emission = [i for s in plan.steps for i in s.cnots]
    attach = _unary_attachment(circuit, slice_, emission, dag.kind == "relaxed")
    # unary gates grouped by the cnot they precede, preserving source order
    before: dict[int | None, list[Gate]] = {}
    for g in circuit.gates:
        if g.index in attach:
            before.setdefault(attach[g.index], []).append(g)

    mapping = list(plan.initial_map)
    out: list[Gate] = []

    def emit(name: str, qubits, params=(), cbits=()) -> None:
        out.append(Gate(name, tuple(qubits), tuple(params), tuple(cbits), len(out)))

    def emit_unaries_for(cid: int | None) -> None:
        for g in before.pop(cid, []):
            emit(g.name, (mapping[g.qubits[0]],), g.params)

    bridged = {s.action.cnot_id: s.action for s in plan.steps if isinstance(s.action, Bridge)}
    for t, step in enumerate(plan.steps):
        if isinstance(step.action, Swap):
            _apply_swap(mapping, step.action.p, step.action.q)
            emit("swap", (step.action.p, step.action.q))
        for cid in step.cnots:
            emit_unaries_for(cid)
            c, d = slice_.pair(cid)
            pc, pd = mapping[c], mapping[d]
            if cid in bridged:
                br = bridged[cid]
                if (br.control_phys, br.data_phys) != (pc, pd):
                    raise SynthesisError(f"bridge endpoints disagree with mapping at t={t}")
                m = br.middle_phys
                emit("cx", (m, pd))
                emit("cx", (pc, m))
                emit("cx", (m, pd))
                emit("cx", (pc, m))
            else:
                emit(slice_.names[cid], (pc, pd))
    if mapping != list(plan.final_map):
        raise SynthesisError("replayed final mapping disagrees with plan")
    emit_unaries_for(None)
    if before:
        raise SynthesisError("unary gates left unplaced")
    for g in circuit.gates:
        if g.name == "measure":
            emit("measure", (mapping[g.qubits[0]],), cbits=g.cbits)
    return Circuit(num_physical, tuple(out), circuit.name + "_mapped",
                   circuit.qreg_name, circuit.cregs)


def compute_metrics(plan: Plan | None, original: Circuit, mapped: Circuit | None,
                    status: str, step_times: list[float], total_time: float,
                    lower_bound: int = 0) -> dict:
    metrics = {
        "status": status,
        "step_times": [round(x, 6) for x in step_times],
        "total_time": round(total_time, 6),
    }
    if plan is None:
        metrics["lower_bound"] = lower_bound
        return metrics
    swaps, bridges = plan.swaps, plan.bridges
    metrics.update(
        swaps=swaps,
        bridges=bridges,
        added_cnots=3 * (swaps + bridges),
        cnot_total=mapped.cx_count + 3 * mapped.count("swap"),
        depth_before=circuit_depth(original),
        depth_after=circuit_depth(mapped),
    )
    return metrics


def synthesize(
    circuit: Circuit,
    coupling: CouplingGraph,
    options: EncodeOptions = EncodeOptions(),
    limits: Limits = Limits(),
    solver_spec: str = "internal",
) -> MappedResult:
    start = time.monotonic()
    slice_ = extract_cnot_slice(circuit)
    if options.relaxed:
        dag = build_relaxed_dag(circuit)
    else:
        dag = build_dependency_dag(slice_, circuit)
    encoder = TwoWayEncoder(circuit.num_qubits, slice_, dag, coupling, options)
    solver = make_solver(encoder.cnf, solver_spec)

    step_times: list[float] = []
    t = 0
    while True:
        if limits.max_steps is not None and t > limits.max_steps:
            return MappedResult(None, None, compute_metrics(
                None, circuit, None, "timeout", step_times,
                time.monotonic() - start, lower_bound=t))
        budget = None
        if limits.time_limit is not None:
            budget = limits.time_limit - (time.monotonic() - start)
            if budget <= 0:
                return MappedResult(None, None, compute_metrics(
                    None, circuit, None, "timeout", step_times,
                    time.monotonic() - start, lower_bound=t))
        encoder.build_step(t)
        result = solver.solve([encoder.assumption_literal(t)], time_limit=budget)
        step_times.append(result.stats.get("time", 0.0))
        if result.status is Status.SAT:
            plan = decode_model(result.model, encoder, t)
            mapped = reconstruct(plan, circuit, dag, coupling.num_physical)
            metrics = compute_metrics(plan, circuit, mapped, "optimal",
                                      step_times, time.monotonic() - start)
            return MappedResult(plan, mapped, metrics)
        if result.status is Status.UNKNOWN:
            return MappedResult(None, None, compute_metrics(
                None, circuit, None, "timeout", step_times,
                time.monotonic() - start, lower_bound=t))
        t += 1
