"""What does a Gaussian field look like when forced to be huge at one point?

We build a squared-exponential field on [0, 1], condition it on a large value
at x0 = 0.5, and compare one conditioned realization against the predicted
limit shape: the covariance column C(x, x0), normalized.  The larger the
threshold u, the closer every realization hugs that single deterministic curve.
"""

import condfield as cf

grid = cf.make_grid(0.0, 1.0, 128)
kernel = cf.SquaredExponential(variance=1.0, ell=0.2)
cov = cf.assemble(kernel, grid)
factor = cf.sqrt_factor(cov)
functional = cf.make_point_functional(grid, 0.5)

limit_profile = cf.profile(functional, cov)  # the column C(., x0)
constants = cf.constants(functional, cov)
print(f"constants: <T|C|T> = {constants.tct:.4f}, A = {constants.a_const:.3f}, "
      f"B = {constants.b_const:.3f}, D = {constants.d_const:.3f}")

for u in (10.0, 1000.0, 100000.0):
    spec = cf.ConditionSpec(u=u, scalar=cf.COMPLEX, mode=cf.FIXED_RHO, rho=1.0)
    sample = cf.sample_conditional(factor, functional, spec, cf.substream(0, 0),
                                   noise=cf.white_noise(grid.m, grid.w, cf.COMPLEX,
                                                        cf.substream(0, 1)))
    dist = cf.normalized_sup_distance(sample, limit_profile, grid)
    rhs = cf.estimate0_rhs(sample, constants, grid)
    print(f"u = {u:>8.0f}: sup distance to profile = {dist:.2e}   "
          f"(theory envelope {rhs:.2e})")

print()
print("The same noise realization gets pinned to the profile as u grows;")
print("the measured distance always sits below the proof's envelope.")
