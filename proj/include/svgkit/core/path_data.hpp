#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace svgkit::core {

struct PathCommand {
    char op = 'M';
    /// Arguments for one or more repetitions of `op`; the size is always a
    /// multiple of arity(op). Arc flags are stored as 0.0 / 1.0.
    std::vector<double> args;

    bool operator==(const PathCommand&) const = default;
};

struct PathData {
    std::vector<PathCommand> commands;

    bool operator==(const PathData&) const = default;
    bool empty() const { return commands.empty(); }
};

/// Number of arguments consumed by one repetition of `op`, or -1 if `op` is
/// not a path command letter.
int path_arity(char op);
bool is_path_command(char c);

/// Parses SVG path data. Throws PathSyntaxError on bad letters, dangling or
/// partial argument groups, or a first command other than moveto.
/// Empty (or whitespace-only) input yields an empty PathData.
PathData parse_path_data(std::string_view text);

std::string format_path_data(const PathData& path, int precision = 2);

/// Applies `fn(value)` to every argument that is a length or coordinate
/// (everything except arc rotation and flags).
template <typename Fn>
void for_each_path_length(PathData& path, Fn&& fn) {
    for (auto& cmd : path.commands) {
        const bool arc = cmd.op == 'A' || cmd.op == 'a';
        for (std::size_t i = 0; i < cmd.args.size(); ++i) {
            if (arc) {
                const std::size_t k = i % 7;
                if (k == 2 || k == 3 || k == 4) {
                    continue;
                }
            }
            cmd.args[i] = fn(cmd.args[i]);
        }
    }
}

} // namespace svgkit::core
