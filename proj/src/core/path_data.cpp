#include "svgkit/core/path_data.hpp"

#include "svgkit/core/number.hpp"
#include "svgkit/error.hpp"

namespace svgkit::core {

int path_arity(char op) {
    switch (op) {
    case 'M': case 'm': case 'L': case 'l': case 'T': case 't':
        return 2;
    case 'H': case 'h': case 'V': case 'v':
        return 1;
    case 'C': case 'c':
        return 6;
    case 'S': case 's': case 'Q': case 'q':
        return 4;
    case 'A': case 'a':
        return 7;
    case 'Z': case 'z':
        return 0;
    default:
        return -1;
    }
}

bool is_path_command(char c) { return path_arity(c) >= 0; }

PathData parse_path_data(std::string_view text) {
    PathData path;
    NumberScanner scan(text);
    scan.skip_ws();
    while (!scan.at_end()) {
        const char op = scan.peek();
        const int arity = path_arity(op);
        if (arity < 0) {
            throw PathSyntaxError("unexpected character '" + std::string(1, op) +
                                  "' in path data at offset " + std::to_string(scan.pos()));
        }
        if (path.commands.empty() && op != 'M' && op != 'm') {
            throw PathSyntaxError("path data must begin with a moveto command");
        }
        scan.advance();
        PathCommand cmd{op, {}};
        scan.skip_ws();
        if (arity == 0) {
            path.commands.push_back(std::move(cmd));
            continue;
        }
        bool first = true;
        while (true) {
            if (!first) {
                scan.skip_separator();
            }
            // A new group only starts where a number starts.
            const char c = scan.peek();
            const bool starts_number = (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+';
            if (!starts_number) {
                if (first) {
                    throw PathSyntaxError(std::string("command '") + op + "' has no arguments");
                }
                break;
            }
            for (int k = 0; k < arity; ++k) {
                if (k) {
                    scan.skip_separator();
                }
                const bool is_flag = (op == 'A' || op == 'a') && (k == 3 || k == 4);
                if (is_flag) {
                    auto f = scan.flag();
                    if (!f) {
                        throw PathSyntaxError("invalid arc flag in path data");
                    }
                    cmd.args.push_back(*f ? 1.0 : 0.0);
                } else {
                    auto v = scan.number();
                    if (!v) {
                        throw PathSyntaxError(std::string("command '") + op +
                                              "' has an incomplete argument group");
                    }
                    cmd.args.push_back(*v);
                }
            }
            first = false;
        }
        path.commands.push_back(std::move(cmd));
        scan.skip_ws();
    }
    return path;
}

std::string format_path_data(const PathData& path, int precision) {
    std::string out;
    for (const auto& cmd : path.commands) {
        out += cmd.op;
        for (std::size_t i = 0; i < cmd.args.size(); ++i) {
            if (i) {
                out += ' ';
            }
            out += format_number(cmd.args[i], precision);
        }
    }
    return out;
}

} // namespace svgkit::core
