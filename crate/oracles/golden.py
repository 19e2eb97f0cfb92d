"""Independent high-precision oracle for frozen test values (mpmath, 50 digits)."""
from mpmath import mp, mpf, sqrt, cosh, sinh, exp, quad, findroot, acosh

mp.dps = 50

def bisect(f, lo, hi, it=400):
    flo = f(lo)
    for _ in range(it):
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2

lam, nc, gp, gm = mpf(2), mpf('0.5'), mpf(21), mpf(30)
alpha = sqrt(gm / (gp + gm))
k = sqrt(lam)

def F_vitro(R, cB, cbar):
    return cbar / cB * (cosh(k * R) + sqrt(nc) * sinh(k * R)) - sqrt(nc) * sinh(k * (1 - alpha) * R) - cosh(k * (1 - alpha) * R)

def F_vivo(R, cB, cbar):
    q = (1 - sqrt(nc)) / (1 + sqrt(nc))
    return cB / 2 * (exp(-alpha * k * R) + q * exp((alpha - 2) * k * R)) - cbar

speed = sqrt((gp + gm) * gm) - gm
Rvitro = bisect(lambda R: F_vitro(R, 1, mpf('0.6')), mpf('1e-8'), mpf(4))
Rvivo = bisect(lambda R: -F_vivo(R, 1, mpf('0.3')), mpf(0), mpf(8))
print("speed factor", speed)
print("R_vitro(cB=1,cbar=0.6)", Rvitro, "sigma", Rvitro * speed)
print("R_vivo(cB=1,cbar=0.3)", Rvivo, "sigma", Rvivo * speed)
print("R_vitro(cB=1,cbar=0.3)", bisect(lambda R: F_vitro(R, 1, mpf('0.3')), mpf('1e-8'), mpf(8)))
print("R_vitro(cB=2,cbar=0.6)", bisect(lambda R: F_vitro(R, 2, mpf('0.6')), mpf('1e-8'), mpf(8)))
print("arccosh(2)", acosh(2))
print("F_vivo(0)+cbar", F_vivo(0, 1, 0))
print("0.9^50", mpf('0.9') ** 50)

# R_b for G(c) = 200 (c - 0.3), psi(1) = 2, c_B = 1 (in vitro envelope).
def env_vitro(R):
    return quad(lambda s: s * 200 * (1 / cosh(k * R * s) - mpf('0.3')), [0, 1])
def env_vivo(R):
    return quad(lambda s: s * 200 * (exp(-k * R * s) * (1 + exp(-k * R * s)) / 2 - mpf('0.3')), [0, 1])
print("R_b vitro linear G", bisect(env_vitro, mpf(0), mpf(10), 200))
print("R_b vivo linear G", bisect(env_vivo, mpf(0), mpf(10), 200))
