#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace lqgltr::csv {

// All numeric CSV output uses 9 significant digits.
inline std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

class Writer {
public:
    void header(const std::vector<std::string>& names) { append_row(names); }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format(v));
        append_row(cells);
    }

    void append_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

}  // namespace lqgltr::csv
