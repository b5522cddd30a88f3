from __future__ import annotations

from pathlib import Path

import pandas as pd
import streamlit as st

from swarmplan.config import load_config
from swarmplan.core.baseline_planner import plan_nearest_neighbor
from swarmplan.core.settings import DashboardSettings, load_settings, save_settings
from swarmplan.core.sim_metrics import energy_breakdown, reduction, traversal_order
from swarmplan.core.swarm_planner import plan
from swarmplan.harness.config_models import RunConfig
from swarmplan.harness.experiment import FIGURE_FILES
from swarmplan.harness.scenarios import generate_scenario, make_fleet
from swarmplan.harness.serialization import read_json
from swarmplan.models.parameters import DEFAULT_AREA

CHART_TITLES = {
    "planning_cost_vs_uavs.csv": "Planning cost (tree energy) vs number of UAVs",
    "energy_vs_uavs.csv": "Realized total energy vs number of UAVs",
    "time_vs_uavs.csv": "Inspection time vs number of UAVs",
    "flight_energy_vs_uavs.csv": "Flight energy vs number of UAVs",
    "hover_tx_energy_vs_uavs.csv": "Hover + transmission energy vs number of UAVs",
}


def _as_path(p: str) -> Path:
    return Path(p).expanduser().resolve()


@st.cache_data
def _read_csv(path: str, mtime: float) -> pd.DataFrame:
    # mtime is part of the cache key so re-run experiments show up
    return pd.read_csv(path)


def _load(results_dir: Path, name: str) -> pd.DataFrame | None:
    path = results_dir / name
    if not path.exists():
        return None
    return _read_csv(str(path), path.stat().st_mtime)


def render_results(results_dir: Path) -> None:
    st.subheader("Experiment results")
    summary_path = results_dir / "summary.json"
    if not summary_path.exists():
        st.info("No summary.json here yet. Run `python -m swarmplan experiment --preset smoke --out <dir>`.")
        return

    summary = read_json(summary_path)
    c1, c2, c3 = st.columns(3)
    c1.metric("Rows", summary.get("rows", 0))
    c2.metric("Infeasible rows", summary.get("infeasible_rows", 0))
    c3.metric("Validation failures", summary.get("validation_failures", 0))

    for name, column in FIGURE_FILES.items():
        df = _load(results_dir, name)
        if df is None or df.empty:
            continue
        st.markdown(f"**{CHART_TITLES[name]}**")
        for n, group in df.groupby("N"):
            wide = group.pivot(index="K", columns="planner", values=f"mean_{column}")
            st.caption(f"N = {n}")
            st.line_chart(wide)

    cdf = _load(results_dir, "time_cdf.csv")
    if cdf is not None and not cdf.empty:
        st.markdown("**Empirical CDF of the inspection time**")
        for (n, k), group in cdf.groupby(["N", "K"]):
            st.caption(f"N = {n}, K = {k}")
            st.line_chart(group, x="inspection_time_s", y="probability", color="planner")

    by_points = _load(results_dir, "time_vs_points.csv")
    if by_points is not None and not by_points.empty and by_points["N"].nunique() > 1:
        st.markdown("**Inspection time vs number of points**")
        for k, group in by_points.groupby("K"):
            st.caption(f"K = {k}")
            st.line_chart(group.pivot(index="N", columns="planner", values="mean_inspection_time_s"))

    with st.expander("Reductions (proposed vs baseline)", expanded=False):
        st.dataframe(pd.DataFrame(summary.get("reductions", [])))
    with st.expander("CDF targets", expanded=False):
        st.dataframe(pd.DataFrame(summary.get("cdf_targets", [])))


def render_playground(settings: DashboardSettings, data_dir: Path) -> None:
    st.subheader("Plan one scenario")
    c1, c2, c3 = st.columns(3)
    with c1:
        n = st.number_input("Points", min_value=0, max_value=400, value=settings.last_points, step=5)
    with c2:
        k = st.number_input("UAVs", min_value=1, max_value=30, value=settings.last_uavs, step=1)
    with c3:
        seed = st.number_input("Seed", min_value=0, value=0, step=1)

    if not st.button("Plan", type="primary"):
        return
    if (n, k) != (settings.last_points, settings.last_uavs):
        save_settings(data_dir, DashboardSettings(settings.active_results_dir, int(n), int(k)))

    cfg = RunConfig(uavs=int(k))
    env, radio = cfg.environment.to_env(), cfg.radio.to_radio()
    sc = generate_scenario(int(n), DEFAULT_AREA, int(seed), radio=radio)
    fleet = make_fleet(int(k), cfg.fleet.template.to_spec(), seed=int(seed), eta_range=cfg.fleet.eta_range)

    with st.spinner("Planning..."):
        proposed = plan(sc, fleet, env, radio, cfg.planner.to_planner())
        baseline = plan_nearest_neighbor(sc, fleet, env, radio, int(seed))

    rows = []
    for result in (proposed, baseline):
        m = energy_breakdown(result, sc, fleet, env, radio)
        rows.append(
            {
                "planner": result.planner,
                "total_J": m.total_energy,
                "flight_J": m.flight_energy,
                "hover_tx_J": m.hover_plus_tx_energy,
                "inspection_time_s": m.inspection_time,
                "feasible": m.feasible,
            }
        )
    table = pd.DataFrame(rows).set_index("planner")
    st.dataframe(table)
    st.caption(
        f"Energy reduction: {reduction(rows[0]['total_J'], rows[1]['total_J']):.1%}; "
        f"time reduction: {reduction(rows[0]['inspection_time_s'], rows[1]['inspection_time_s']):.1%}"
    )

    routes = []
    for result in (proposed, baseline):
        for t in result.trajectories:
            for step, v in enumerate(traversal_order(t)):
                p = sc.points[v]
                routes.append({"route": f"{result.planner}/uav{t.uav_id}", "step": step, "x1": p.x1, "x2": p.x2})
    st.scatter_chart(pd.DataFrame(routes), x="x1", y="x2", color="route")


def main() -> None:
    st.set_page_config(page_title="Swarm inspection planner", layout="wide")
    st.title("Swarm inspection planner")

    cfg = load_config()
    settings = load_settings(cfg.data_dir)

    with st.sidebar:
        st.header("Settings")
        default_dir = settings.active_results_dir or str(cfg.results_dir)
        dir_str = st.text_input("Results folder", value=default_dir)
        results_dir = _as_path(dir_str)
        if not results_dir.is_dir():
            st.error("Results folder does not exist or is not a directory.")
        elif dir_str != settings.active_results_dir:
            settings = DashboardSettings(dir_str, settings.last_points, settings.last_uavs)
            save_settings(cfg.data_dir, settings)
        st.caption("Tip: set `SWARMPLAN_RESULTS_DIR` to persist this.")

    tabs = st.tabs(["Results", "Playground"])
    with tabs[0]:
        if results_dir.is_dir():
            render_results(results_dir)
    with tabs[1]:
        render_playground(settings, cfg.data_dir)


if __name__ == "__main__":
    main()
