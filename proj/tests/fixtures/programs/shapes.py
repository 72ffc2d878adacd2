import sys
import math


def area(kind, dims):
    if kind == "circle" and len(dims) == 1:
        return math.pi * dims[0] ** 2
    if kind == "rect" and len(dims) == 2:
        return dims[0] * dims[1]
    if kind == "tri" and len(dims) == 3:
        a, b, c = dims
        s = (a + b + c) / 2
        inner = s * (s - a) * (s - b) * (s - c)
        if inner < 0:
            return None
        return math.sqrt(inner)
    return None


def perimeter(kind, dims):
    if kind == "circle":
        return 2 * math.pi * dims[0]
    elif kind == "rect":
        return 2 * (dims[0] + dims[1])
    else:
        total = 0
        for d in dims:
            total += d
        return total


def main():
    count = 0
    big = 0
    for line in sys.stdin:
        parts = line.split()
        if not parts:
            continue
        kind = parts[0]
        dims = [float(x) for x in parts[1:]]
        a = area(kind, dims)
        if a is None:
            print(kind, "invalid")
            continue
        p = perimeter(kind, dims)
        count += 1
        if a > 10 and p > 10:
            big += 1
        print(kind, "%.3f" % a, "%.3f" % p)
    print("shapes", count, "big", big)


main()
