"""Synthetic instances shaped like the XML100 benchmark set.

Depot at the centre, a corner or random; customers uniform, clustered or
half of each; demands unitary, small, large or depot-quadrant dependent;
capacity set from a target average route size.  Coordinates lie on a
1000 x 1000 grid.
"""

import math
import random

from mscvrp.instance import Instance


def xml100_like(rng: random.Random, n: int = 100, name: str = "xml") -> Instance:
    depot_kind = rng.choice(["central", "eccentric", "random"])
    if depot_kind == "central":
        depot = (500, 500)
    elif depot_kind == "eccentric":
        depot = (0, 0)
    else:
        depot = (rng.randint(0, 1000), rng.randint(0, 1000))

    layout = rng.choice(["random", "clustered", "random-clustered"])
    n_clustered = {"random": 0, "clustered": n, "random-clustered": n // 2}[layout]
    seeds = [(rng.randint(0, 1000), rng.randint(0, 1000)) for _ in range(rng.randint(3, 8))]
    taken = {depot}
    coords = []
    while len(coords) < n:
        if len(coords) < n_clustered:
            sx, sy = rng.choice(seeds)
            ang, rad = rng.uniform(0, 2 * math.pi), abs(rng.gauss(0, 40))
            p = (min(1000, max(0, round(sx + rad * math.cos(ang)))),
                 min(1000, max(0, round(sy + rad * math.sin(ang)))))
        else:
            p = (rng.randint(0, 1000), rng.randint(0, 1000))
        if p not in taken:
            taken.add(p)
            coords.append(p)

    dem_kind = rng.choice(["unitary", "small", "large", "quadrant"])
    demands = []
    for x, y in coords:
        if dem_kind == "unitary":
            q = 1
        elif dem_kind == "small":
            q = rng.randint(1, 10)
        elif dem_kind == "large":
            q = rng.randint(50, 100)
        else:
            q = rng.randint(51, 100) if (x >= 500) == (y >= 500) else rng.randint(1, 50)
        demands.append(q)

    route_size = rng.uniform(3, 25)
    capacity = max(max(demands), math.ceil(route_size * sum(demands) / n))
    return Instance(name, (depot, *coords), (0, *demands), capacity, tuple(range(1, n + 2)))
