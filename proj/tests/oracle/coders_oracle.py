"""Reference values for coders and statistics, from exact integer
arithmetic and 50-digit mpmath. The outputs are frozen in the unit tests."""
from math import comb, ceil, log2
from mpmath import mp, mpf, ncdf, log

mp.dps = 50


def ceil_log2_int(v):
    return 0 if v <= 1 else (v - 1).bit_length()


def lz78_length(bits):
    dictionary = {"": 0}
    phrases = []
    cur = ""
    for b in bits:
        if cur + b in dictionary:
            cur += b
            continue
        phrases.append(True)
        dictionary[cur + b] = len(dictionary)
        cur = ""
    if cur:
        phrases.append(False)
    return sum(ceil_log2_int(i + 1) + (1 if lit else 0) for i, lit in enumerate(phrases))


for n, k in [(16, 3), (30, 15), (64, 17), (256, 128), (512, 200)]:
    print(f"ceil_log2_binomial({n}, {k}) = {ceil_log2_int(comb(n, k))}")

for s in ["0000000000", "0110100110010110", "1" * 32, "0101010101010101010"]:
    print(f"lz78_length('{s}') = {lz78_length(s)}")

n, k, m = 16, 3, 4
print("sparse length (16, 3, 4) =", 3 + ceil_log2_int(n + 1) + ceil_log2_int(comb(n, k)) + k * m)
print("binary_entropy(0.25) =", mp.nstr(-(mpf(1) / 4) * log(mpf(1) / 4, 2) - (mpf(3) / 4) * log(mpf(3) / 4, 2), 20))
print("log_star(1000) =", mp.nstr(10 + 2 * log(mpf(10), 2), 20))
for x in ["1", "-2.5", "0.3"]:
    print(f"normal_cdf({x}) =", mp.nstr(ncdf(mpf(x)), 20))
