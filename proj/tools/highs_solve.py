#!/usr/bin/env python3
"""Solve a free-MPS MILP and write a HiGHS-style solution file.

Uses highspy when importable, otherwise scipy.optimize.milp on a small
free-MPS reader. Exit code 0 whenever a solution file was written.
"""
import argparse
import math
import sys


def write_solution(path, status, objective, names, values, row_names, activities, gap):
    with open(path, "w") as f:
        f.write("Model status\n%s\n\n" % status)
        if values is None:
            f.write("# Primal solution values\nNone\n")
            return
        f.write("# Primal solution values\nFeasible\nObjective %r\n" % objective)
        f.write("# Columns %d\n" % len(names))
        for n, v in zip(names, values):
            f.write("%s %r\n" % (n, float(v)))
        f.write("# Rows %d\n" % len(row_names))
        for n, v in zip(row_names, activities):
            f.write("%s %r\n" % (n, float(v)))
        if gap is not None:
            f.write("# MIP gap %r\n" % gap)


def solve_highspy(args):
    import highspy

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", float(args.time_limit))
    h.setOptionValue("mip_rel_gap", float(args.mip_rel_gap))
    h.setOptionValue("threads", 1)
    if h.readModel(args.model_file) == highspy.HighsStatus.kError:
        print("cannot read model", file=sys.stderr)
        return 1
    h.run()
    ms = h.getModelStatus()
    status = h.modelStatusToString(ms)
    lp = h.getLp()
    names = [lp.col_names_[j] for j in range(lp.num_col_)]
    row_names = [lp.row_names_[i] for i in range(lp.num_row_)]
    info = h.getInfo()
    sol = h.getSolution()
    has_primal = info.primal_solution_status == 2
    gap = None
    if lp.integrality_ and any(int(t) != 0 for t in lp.integrality_):
        gap = info.mip_gap if math.isfinite(info.mip_gap) else None
    if ms == highspy.HighsModelStatus.kOptimal:
        status = "Optimal"
    elif ms == highspy.HighsModelStatus.kInfeasible:
        status = "Infeasible"
    elif ms == highspy.HighsModelStatus.kTimeLimit:
        status = "Time limit reached"
    write_solution(args.solution_file, status, info.objective_function_value, names,
                   list(sol.col_value) if has_primal else None, row_names, list(sol.row_value), gap)
    return 0


def read_free_mps(path):
    rows, row_sense, row_order = {}, {}, []
    obj_name, sense_max = None, False
    cols, col_index, integer = [], {}, []
    coef, obj = {}, {}
    rhs, obj_const = {}, 0.0
    bounds = {}
    section, in_int = None, False
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line or line.startswith("*"):
                continue
            if not raw[0].isspace():
                parts = line.split()
                section = parts[0]
                if section == "OBJSENSE" and len(parts) > 1:
                    sense_max = parts[1].upper().startswith("MAX")
                continue
            parts = line.split()
            if section == "OBJSENSE":
                sense_max = parts[0].upper().startswith("MAX")
            elif section == "ROWS":
                kind, name = parts
                if kind == "N":
                    obj_name = obj_name or name
                else:
                    row_sense[name] = kind
                    rows[name] = len(row_order)
                    row_order.append(name)
            elif section == "COLUMNS":
                if len(parts) >= 3 and parts[1] == "'MARKER'":
                    in_int = parts[2] == "'INTORG'"
                    continue
                name = parts[0]
                if name not in col_index:
                    col_index[name] = len(cols)
                    cols.append(name)
                    integer.append(in_int)
                j = col_index[name]
                for k in range(1, len(parts) - 1, 2):
                    r, v = parts[k], float(parts[k + 1])
                    if r == obj_name:
                        obj[j] = obj.get(j, 0.0) + v
                    else:
                        coef[(rows[r], j)] = coef.get((rows[r], j), 0.0) + v
            elif section == "RHS":
                for k in range(1, len(parts) - 1, 2):
                    r, v = parts[k], float(parts[k + 1])
                    if r == obj_name:
                        obj_const = -v
                    else:
                        rhs[rows[r]] = v
            elif section == "BOUNDS":
                kind, name = parts[0], parts[2]
                val = float(parts[3]) if len(parts) > 3 else None
                lo, hi = bounds.get(name, (0.0, math.inf))
                if kind == "UP":
                    hi = val
                elif kind == "LO":
                    lo = val
                elif kind == "FX":
                    lo = hi = val
                elif kind == "FR":
                    lo, hi = -math.inf, math.inf
                elif kind == "MI":
                    lo = -math.inf
                elif kind == "PL":
                    hi = math.inf
                elif kind == "BV":
                    lo, hi = 0.0, 1.0
                bounds[name] = (lo, hi)
    return dict(row_order=row_order, row_sense=row_sense, cols=cols, integer=integer, coef=coef,
                obj=obj, rhs=rhs, obj_const=obj_const, bounds=bounds, sense_max=sense_max)


def solve_scipy(args):
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    m = read_free_mps(args.model_file)
    n, r = len(m["cols"]), len(m["row_order"])
    c = np.zeros(n)
    for j, v in m["obj"].items():
        c[j] = v
    sign = -1.0 if m["sense_max"] else 1.0
    ij = list(m["coef"].items())
    A = coo_matrix(([v for _, v in ij], ([k[0] for k, _ in ij], [k[1] for k, _ in ij])), shape=(r, n)).tocsr()
    lo_r, hi_r = np.full(r, -np.inf), np.full(r, np.inf)
    for i, name in enumerate(m["row_order"]):
        b = m["rhs"].get(i, 0.0)
        kind = m["row_sense"][name]
        if kind in ("L", "E"):
            hi_r[i] = b
        if kind in ("G", "E"):
            lo_r[i] = b
    lb = np.array([m["bounds"].get(nm, (0.0, math.inf))[0] for nm in m["cols"]])
    ub = np.array([m["bounds"].get(nm, (0.0, math.inf))[1] for nm in m["cols"]])
    integ = np.array([1 if x else 0 for x in m["integer"]])
    res = milp(sign * c, constraints=[LinearConstraint(A, lo_r, hi_r)] if r else None,
               integrality=integ, bounds=Bounds(lb, ub),
               options={"time_limit": float(args.time_limit), "mip_rel_gap": float(args.mip_rel_gap)})
    status = {0: "Optimal", 1: "Time limit reached", 2: "Infeasible", 3: "Unbounded"}.get(res.status, "Error")
    if res.x is None:
        write_solution(args.solution_file, status, 0.0, m["cols"], None, m["row_order"], [], None)
        return 0
    x = res.x
    act = A @ x if r else []
    gap = getattr(res, "mip_gap", None) if integ.any() else None
    write_solution(args.solution_file, status, float(c @ x) + m["obj_const"], m["cols"], list(x),
                   m["row_order"], list(act), gap)
    return 0


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--model_file", required=True)
    p.add_argument("--solution_file", required=True)
    p.add_argument("--time_limit", default="600")
    p.add_argument("--mip_rel_gap", default="1e-6")
    p.add_argument("--backend", choices=["auto", "highspy", "scipy"], default="auto")
    args = p.parse_args()
    if args.backend in ("auto", "highspy"):
        try:
            import highspy  # noqa: F401
        except ImportError:
            if args.backend == "highspy":
                print("highspy is not installed", file=sys.stderr)
                return 1
        else:
            return solve_highspy(args)
    return solve_scipy(args)


if __name__ == "__main__":
    sys.exit(main())
