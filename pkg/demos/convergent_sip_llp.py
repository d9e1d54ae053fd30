"""The variant that works: discretize with minimizers of max(g, hbar).

Adding minimizers of the pointwise maximum of the two disjuncts makes the
loop converge on both counterexamples in two iterations, and the final
lower bound matches the true optimal value 0.5.
"""
from gsiplab import SIP_LLP, AlgorithmConfig, builtin_problems, run

for problem in builtin_problems():
    result = run(problem, AlgorithmConfig(variant=SIP_LLP))
    print(f"problem {problem.name} (true value {problem.f_star}):")
    for rec in result.trace:
        print(f"  k={rec.k}  x={rec.x['x']:.6f}  bound={rec.f_lower:.6f}  "
              f"sip-llp value={rec.sip.value:.6f}")
    print(f"  status: {result.status}, "
          f"final bound {result.final_lower_bound:.6f}\n")
