#include "rgbethe/jsonio.hpp"

#include <cmath>
#include <cstdio>

namespace rgbethe {

std::string format_double(double v) {
    // JSON has no NaN or infinity
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // keep it a JSON float so that integers-valued doubles read back as doubles
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

namespace {

void write(const ojson& v, int indent, int depth, std::string& out) {
    auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (v.type()) {
        case ojson::value_t::object: {
            if (v.empty()) { out += "{}"; return; }
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += ojson(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                write(it.value(), indent, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        case ojson::value_t::array: {
            if (v.empty()) { out += "[]"; return; }
            // arrays of scalars stay on one line
            bool flat = true;
            for (const auto& e : v)
                if (e.is_structured()) flat = false;
            out += '[';
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += flat ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                write(e, indent, depth + 1, out);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case ojson::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        default:
            out += v.dump();
    }
}

}  // namespace

std::string dump_json(const ojson& value, int indent) {
    std::string out;
    write(value, indent, 0, out);
    return out;
}

}  // namespace rgbethe
