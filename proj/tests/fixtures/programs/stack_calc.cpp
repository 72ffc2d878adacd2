#include <iostream>
#include <sstream>
#include <stack>
#include <string>

namespace {

bool is_number(const std::string& tok) {
    if (tok.empty()) return false;
    size_t start = 0;
    if (tok[0] == '-' && tok.size() > 1) start = 1;
    for (size_t i = start; i < tok.size(); i++) {
        if (tok[i] < '0' || tok[i] > '9') return false;
    }
    return true;
}

bool apply(std::stack<long>& st, const std::string& op) {
    if (st.size() < 2) {
        return false;
    }
    long b = st.top();
    st.pop();
    long a = st.top();
    st.pop();
    long r = 0;
    if (op == "+") {
        r = a + b;
    } else if (op == "-") {
        r = a - b;
    } else if (op == "*") {
        r = a * b;
    } else if (op == "/" && b != 0) {
        r = a / b;
    } else {
        return false;
    }
    st.push(r);
    return true;
}

}  // namespace

int main() {
    std::string line;
    int ok = 0;
    while (std::getline(std::cin, line)) {
        std::istringstream in(line);
        std::stack<long> st;
        std::string tok;
        bool good = true;
        while (in >> tok) {
            if (is_number(tok)) {
                st.push(std::stol(tok));
                continue;
            }
            if (!apply(st, tok)) {
                good = false;
                break;
            }
        }
        if (good && st.size() == 1) {
            std::cout << st.top() << "\n";
            ok += 1;
        } else {
            std::cout << "error\n";
        }
    }
    std::cout << "ok " << ok << "\n";
    return 0;
}
