#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

namespace {

std::vector<int> letter_counts(const std::string& text) {
    std::vector<int> counts(26, 0);
    for (char c : text) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
        if (c < 'a' || c > 'z') {
            continue;
        }
        counts[c - 'a'] += 1;
    }
    return counts;
}

int max_count(const std::vector<int>& counts) {
    int best = 0;
    for (int c : counts) {
        if (c > best) best = c;
    }
    return best;
}

std::string bar(int count, int best, int width) {
    if (best == 0) return "";
    int len = count * width / best;
    return std::string(len, '#');
}

}  // namespace

int main(int argc, char** argv) {
    int width = 20;
    if (argc > 1) width = std::stoi(argv[1]);
    std::string text;
    std::string line;
    while (std::getline(std::cin, line)) {
        text += line;
        text += ' ';
    }
    std::vector<int> counts = letter_counts(text);
    int best = max_count(counts);
    int shown = 0;
    for (int i = 0; i < 26; i++) {
        if (counts[i] == 0) continue;
        std::cout << static_cast<char>('a' + i) << " " << counts[i] << " "
                  << bar(counts[i], best, width) << "\n";
        shown += 1;
    }
    std::cout << "letters " << shown << " max " << best << "\n";
    return 0;
}
