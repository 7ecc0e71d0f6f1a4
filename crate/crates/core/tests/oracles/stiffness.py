import mpmath as mp
mp.mp.dps = 20
def C(s): return 2**(2*s)*s*mp.gamma(s+0.5)/(mp.sqrt(mp.pi)*mp.gamma(1-s))
def hat(i,h,a):
    xi=a+i*h
    return lambda x: max(0, 1-abs(x-xi)/h)
def brute(i,j,n,s,a=0,b=1):
    h=mp.mpf(b-a)/(n+1)
    pi_,pj=hat(i,h,a),hat(j,h,a)
    nodes=[a+k*h for k in range(n+2)]
    def inner(x):
        pts=sorted(set(nodes+[x]))
        f=lambda y: (pi_(x)-pi_(y))*(pj(x)-pj(y))*abs(x-y)**(-1-2*s) if y!=x else 0
        return mp.quad(f,pts)
    I=mp.quad(inner,nodes)
    rho=lambda x: ((x-a)**(-2*s)+(b-x)**(-2*s))/(2*s)
    E=mp.quad(lambda x: pi_(x)*pj(x)*rho(x), nodes)
    return C(s)*(I+2*E)
def closed(d,h,s):
    p=3-2*s
    st=[1,-4,6,-4,1]
    D=sum(c*abs(mp.mpf(d+q))**p for c,q in zip(st,range(-2,3)))
    return C(s)*h**(1-2*s)*D/(s*(1-2*s)*(2-2*s)*(3-2*s))
import sys

# usage: stiffness.py S N [i,j ...]     prints "S i j value" (1-based, i <= j)
# Without pairs, every upper-triangle entry is computed (slow: minutes per entry).
if __name__ == "__main__":
    s = mp.mpf(sys.argv[1]); n = int(sys.argv[2])
    pairs = [tuple(map(int, p.split(","))) for p in sys.argv[3:]] or [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    h = mp.mpf(1) / (n + 1)
    for i, j in pairs:
        b = brute(i, j, n, s)
        # on a uniform mesh the closed form is an independent check (singular at s = 1/2)
        if s != mp.mpf(1) / 2:
            assert abs(b - closed(abs(i - j), h, s)) < 1e-10 * abs(b), (i, j)
        print(sys.argv[1], i, j, mp.nstr(b, 18), flush=True)
