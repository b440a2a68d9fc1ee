"""Regenerate tests/golden/*.svg. Run only after verifying a change to the drawings."""
from pathlib import Path

from sepcycle import approx, convex, render
from sepcycle.cycle2d import construct
from sepcycle.hypergraph import RED, BLUE, bipartition
from sepcycle.instances_io import gen_fig3, gen_fig17, gen_grid_hard

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def canonical():
    """(file name, svg text) for the three reference drawings."""
    fig3 = gen_fig3()
    col = bipartition(fig3.hypergraph)
    yield "fig3_construct.svg", render.render_svg(fig3, col.colors, cycle=construct(fig3, col).cycle)

    grid = gen_grid_hard(3)
    res = approx.sqrt_approx_detailed(grid)
    yield "grid3_sqrt.svg", render.render_svg(grid, res.construction.coloring.colors, cycle=res.cycle)

    f17 = gen_fig17()
    tour = convex.oracle_convex(f17)
    sel = set(tour.selection)
    colors = [RED if i in sel else BLUE for i in range(f17.n)]
    yield "fig17_oracle.svg", render.render_svg(f17, colors, cycle=tour.cycle)


if __name__ == "__main__":
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, text in canonical():
        (GOLDEN / name).write_text(text, encoding="utf-8")
        print("wrote", GOLDEN / name)
