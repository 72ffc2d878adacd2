import sys


def mean(values):
    total = 0
    count = 0
    for v in values:
        total += v
        count += 1
    if count == 0:
        return 0
    return total / count


def variance(values):
    m = mean(values)
    acc = 0.0
    for v in values:
        diff = v - m
        acc += diff * diff
    if len(values) > 1 and m != 0:
        return acc / (len(values) - 1)
    elif len(values) > 1:
        return acc / len(values)
    else:
        return 0.0


def classify(x, lo, hi):
    if x < lo:
        return "low"
    elif x > hi:
        return "high"
    else:
        return "mid"


def main():
    data = [int(tok) for tok in sys.stdin.read().split()]
    m = mean(data)
    print("mean", round(m, 4))
    print("var", round(variance(data), 4))
    lo = m - 1
    hi = m + 1
    for x in data:
        if x < 0 or x > 1000:
            continue
        print(x, classify(x, lo, hi))


if __name__ == "__main__":
    main()
