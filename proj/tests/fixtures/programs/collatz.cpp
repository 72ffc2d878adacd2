#include <iostream>
#include <map>
#include <vector>

namespace {

long steps(long n) {
    long count = 0;
    while (n != 1) {
        if (n % 2 == 0) {
            n /= 2;
        } else {
            n = 3 * n + 1;
        }
        count += 1;
    }
    return count;
}

long peak(long n) {
    long best = n;
    while (n > 1) {
        n = n % 2 == 0 ? n / 2 : 3 * n + 1;
        if (n > best) best = n;
    }
    return best;
}

}  // namespace

int main() {
    long lo = 0;
    long hi = 0;
    std::cin >> lo >> hi;
    if (lo < 1) lo = 1;
    std::map<long, int> histogram;
    long longest = lo;
    for (long n = lo; n <= hi; n++) {
        long s = steps(n);
        histogram[s / 10] += 1;
        if (s > steps(longest)) {
            longest = n;
        }
    }
    std::cout << "longest " << longest << " steps " << steps(longest) << "\n";
    std::cout << "peak " << peak(longest) << "\n";
    for (const auto& [bucket, count] : histogram) {
        std::cout << bucket * 10 << "-" << bucket * 10 + 9 << ": " << count << "\n";
    }
    std::vector<long> evens;
    for (long n = lo; n <= hi && n < lo + 20; n++) {
        if (n % 2 != 0) continue;
        evens.push_back(n);
    }
    std::cout << "evens " << evens.size() << "\n";
    return 0;
}
