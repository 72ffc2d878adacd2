import sys


def simulate(arrivals, service):
    clock = 0
    waiting = []
    served = 0
    total_wait = 0
    i = 0
    while i < len(arrivals) or waiting:
        if i < len(arrivals) and arrivals[i] <= clock:
            waiting.append(arrivals[i])
            i += 1
            continue
        if waiting:
            start = waiting.pop(0)
            total_wait += clock - start
            served += 1
            clock += service
        else:
            clock = arrivals[i]
    return served, total_wait, clock


def parse_ints(text):
    result = []
    for tok in text.split():
        if tok.lstrip("-").isdigit():
            result.append(int(tok))
    return result


def summary(served, total_wait, clock):
    lines = []
    lines.append("served %d" % served)
    if served > 0 and total_wait > 0:
        lines.append("avg wait %.2f" % (total_wait / served))
    else:
        lines.append("no wait")
    lines.append("end %d" % clock)
    return lines


def main():
    service = int(sys.argv[1])
    arrivals = sorted(parse_ints(sys.stdin.read()))
    served, total_wait, clock = simulate(arrivals, service)
    for line in summary(served, total_wait, clock):
        print(line)


main()
