"""From link transmittances and excess noise to a secure key fraction."""
import numpy as np

from cvmdi.security import EquivalentChannel, ProtocolParams, build_covariance, key_fraction

params = ProtocolParams(variance_alice=40, variance_bob=40, reconciliation_efficiency=1.0)

# a short symmetric link: 2 km per side at 0.18 dB/km
eta = 10 ** (-0.18 * 2 / 10)
channel = EquivalentChannel.from_links(eta, eta, xi_a=0.02, xi_b=0.02)
state = build_covariance(params, channel)
print(f"T = {channel.t_equiv:.4f}, xi' = {channel.xi_prime:.4f} SNU")
print(f"covariance a = {state.a:g}, b = {state.b:.4f}, c = {state.c:.4f}")

r = key_fraction(params, channel)
print(f"I_AB = {r.mutual_information:.4f}, chi_BE = {r.holevo_bound:.4f}, "
      f"K = {r.key_fraction:.4f} bits/use")

# Bob's side is the fragile one: its loss enters xi' as (2 - 2 eta_B) / eta_A.
print("\neta_B   key fraction")
for eta_b in np.linspace(1.0, 0.8, 5):
    k = key_fraction(params, EquivalentChannel.from_links(1.0, eta_b, 0.0, 0.0)).key_fraction
    print(f"{eta_b:.2f}    {k:.4f}")
