#include <stdio.h>
#include <stdlib.h>

static long gcd(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

static long lcm(long a, long b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    return a / gcd(a, b) * b;
}

static int coprime_count(long n) {
    int count = 0;
    for (long k = 1; k <= n; k++) {
        if (gcd(k, n) != 1) {
            continue;
        }
        count += 1;
    }
    return count;
}

int main(void) {
    long a, b;
    int pairs = 0;
    while (scanf("%ld %ld", &a, &b) == 2) {
        long g = gcd(a, b);
        long l = lcm(a, b);
        printf("%ld %ld gcd=%ld lcm=%ld\n", a, b, g, l);
        if (g == 1 && a > 0) {
            printf("phi(%ld)=%d\n", a, coprime_count(a));
        } else if (g > 1) {
            printf("common factor\n");
        } else {
            printf("trivial\n");
        }
        pairs += 1;
    }
    printf("pairs %d\n", pairs);
    return 0;
}
