import sys

PAIRS = {")": "(", "]": "[", "}": "{"}


def balanced(text):
    stack = []
    for ch in text:
        if ch in "([{":
            stack.append(ch)
        elif ch in PAIRS:
            if not stack or stack[-1] != PAIRS[ch]:
                return False
            stack.pop()
    return len(stack) == 0


def max_depth(text):
    depth = 0
    best = 0
    for ch in text:
        if ch in "([{":
            depth += 1
            if depth > best:
                best = depth
        elif ch in ")]}":
            depth -= 1
    return best


def strip_noise(text):
    out = []
    for ch in text:
        if ch.isspace():
            continue
        out.append(ch)
    return "".join(out)


def main():
    good = 0
    lines = sys.stdin.read().splitlines()
    for line in lines:
        clean = strip_noise(line)
        ok = balanced(clean)
        if ok:
            good += 1
        print(repr(clean), ok, max_depth(clean))
    bad = len(lines) - good
    print("good", good, "bad", bad)


main()
