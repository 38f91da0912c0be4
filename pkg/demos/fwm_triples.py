"""Which channel triples mix onto the quantum wavelength, and how much power lands there."""
from cvmdi.channel_plan import ChannelPlan, enumerate_fwm_triples
from cvmdi.config import RunConfig
from cvmdi.noise import fwm_product_power, fwm_total_power

cfg = RunConfig.from_dict()
objs = cfg.parameter_objects()
fiber, fwm = objs["fiber"], objs["fwm_params"]

for cid in cfg.configurations:
    plan = cfg.plan(cid)
    print(f"config {cid}: {len(enumerate_fwm_triples(plan))} triples, "
          f"{fwm_total_power(plan, fiber, fwm, 5.0):.3e} W at 5 km")

# A hand-built plan whose quantum channel sits on the mixing grid.
plan = ChannelPlan(1552.52, tuple(f * 1e12 for f in (193.2, 193.3, 193.4)), -24.0)
for t in enumerate_fwm_triples(plan):
    p = fwm_product_power(t, plan, fiber, fwm, 5.0)
    print(f"  f{t.i} + f{t.j} - f{t.k}  (D={t.degeneracy})  {p:.3e} W")
