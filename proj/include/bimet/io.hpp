#pragma once

#include "bimet/fingen.hpp"
#include "bimet/fraisse.hpp"
#include "bimet/graev.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bimet {

// Malformed input; line is 1-based (0 when no line applies).
class FormatError : public Error {
public:
    FormatError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct FgmFile {
    std::vector<std::string> names;
    FinGenMetric metric;
};

// fgm v1 / rank = n / names = ... / [bound = p/q] / entries "w | w | p/q".
// Blank lines and text after '#' are ignored.
FgmFile read_fgm(std::istream& in);
FgmFile read_fgm_file(const std::string& path);
void write_fgm(std::ostream& out, const FinGenMetric& m, const std::vector<std::string>& names);
void write_fgm(std::ostream& out, const FinGenMetric& m);

// space / point <name> / d <name> <name> <p/q>; the basepoint is named 1.
PointedSpace read_space(std::istream& in);
PointedSpace read_space_file(const std::string& path);
void write_space(std::ostream& out, const PointedSpace& s);

// chain v1 / K = / seed = / per stage an fgm block closed by "end" and, between stages,
// "link: <images>" / trailing "request:" lines.
Chain read_chain(std::istream& in);
Chain read_chain_file(const std::string& path);
void write_chain(std::ostream& out, const Chain& c);

} // namespace bimet
