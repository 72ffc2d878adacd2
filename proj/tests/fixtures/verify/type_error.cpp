#include <iostream>
#include <string>

int twice(int x) { return 2 * x; }

int main() {
    std::string label = "value";
    int n = twice(label);
    std::cout << n << "\n";
    return 0;
}
