"""Key fraction versus total length and the maximal reach for each configuration."""
from cvmdi.config import RunConfig
from cvmdi.scenario import max_distance, sweep

cfg = RunConfig.from_dict()
table = cfg.load_raman_table()

template = cfg.scenario(1, 1.0, table)
result = sweep(template, [0.5 * k for k in range(13)])
for row in result.rows:
    print(f"{row.total_length:4.1f} km  xi'={row.xi_prime:7.4f}  K={row.key_fraction:.4f}")
print(f"sign change refined to {result.max_distance:.3f} km\n")

print("config  " + "  ".join(f"ratio {r:g}" for r in cfg.ratios))
for c in cfg.configurations:
    reach = [max_distance(cfg.scenario(c, r, table), cfg.max_km) for r in cfg.ratios]
    print(f"{c:>6}  " + "  ".join(f"{d:8.3f}" for d in reach))
