import sys


def c_to_f(c):
    return c * 9 / 5 + 32


def f_to_c(f):
    return (f - 32) * 5 / 9


def describe(c):
    label = ""
    if c < 0:
        label = "freezing"
    elif c < 15:
        label = "cold"
    elif c < 25:
        label = "mild"
    else:
        label = "hot"
    return label


def running_max(values):
    out = []
    best = None
    for v in values:
        if best is None or v > best:
            best = v
        out.append(best)
    return out


def main():
    unit = sys.argv[1] if len(sys.argv) > 1 else "c"
    values = []
    for tok in sys.stdin.read().split():
        values.append(float(tok))
    converted = []
    for v in values:
        if unit == "f":
            c = f_to_c(v)
        else:
            c = v
        converted.append(c)
        print("%.2f %.2f %s" % (c, c_to_f(c), describe(c)))
    peaks = running_max(converted)
    count = 0
    total = 0.0
    while count < len(peaks):
        total += peaks[count]
        count += 1
    if count > 0:
        print("avg peak %.3f" % (total / count))


main()
