"""Tour of the closed forms and their quadrature cross-checks.

Run with: python3 demos/closed_forms_tour.py
"""

from wfgcpe import (make_frechet, make_power, make_uniform_shifted,
                    normalized_wfgcpe, weight_x, weight_x_squared, wfgcpe)

GAMMAS = (0.25, 0.5, 1.0, 1.5, 2.75)


def main():
    print("Closed form vs adaptive quadrature")
    print(f"{'family':<14}{'weight':<8}{'gamma':<7}{'closed':<22}"
          f"{'quadrature':<22}{'rel err'}")
    models = [make_power(1.0, 2.0), make_power(2.0, 3.0),
              make_frechet(1.0, 4.0)]
    for model in models:
        for psi in (weight_x(), weight_x_squared()):
            for g in GAMMAS:
                try:
                    closed = wfgcpe(model, psi, g, method="closed_form").value
                except Exception as exc:
                    print(f"{model.family:<14}{psi.tag:<8}{g:<7g}"
                          f"-- {exc}")
                    continue
                quad = wfgcpe(model, psi, g, method="quadrature").value
                rel = abs(closed - quad) / abs(closed)
                print(f"{model.family:<14}{psi.tag:<8}{g:<7g}"
                      f"{closed:<22.15g}{quad:<22.15g}{rel:.1e}")

    print()
    print("Normalized entropy (equals 1 at gamma = 1 by construction)")
    model = make_power(1.0, 2.0)
    for g in GAMMAS:
        print(f"  gamma={g:<6g} normalized={normalized_wfgcpe(model, weight_x(), g):.12g}")

    print()
    print("Shifted uniform on (a, a+1): exact formulas via quadrature")
    for a in (0.0, 1.0, 3.0):
        model = make_uniform_shifted(a)
        for g in (0.5, 1.0, 2.0):
            exact = 3.0 ** -(g + 1.0) + a * 2.0 ** -(g + 1.0)
            got = wfgcpe(model, weight_x(), g, method="quadrature").value
            print(f"  a={a:g} gamma={g:g}: quadrature {got:.15g} "
                  f"exact {exact:.15g} (abs err {abs(got - exact):.1e})")


if __name__ == "__main__":
    main()
