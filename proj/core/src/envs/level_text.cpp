#include <sgphs/envs/level_text.h>

#include <sgphs/errors.h>

#include <algorithm>

namespace sgphs::envs {

auto split_rows(std::string_view text) -> std::vector<std::string> {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        std::string line(text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

auto join_rows(const std::vector<std::string> &rows) -> std::string {
    std::string out;
    for (const auto &row : rows) {
        out += row;
        out += '\n';
    }
    return out;
}

auto parse_level_blocks(std::string_view text) -> std::vector<LevelBlock> {
    const auto lines = split_rows(text);
    std::vector<LevelBlock> blocks;
    LevelBlock *current = nullptr;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto &line = lines[i];
        const int line_no = static_cast<int>(i) + 1;
        if (line.starts_with(";")) {
            auto index = line.substr(1);
            if (!index.empty() && index.front() == ' ') {
                index.erase(0, 1);
            }
            blocks.push_back({index, {}, line_no + 1});
            current = &blocks.back();
            continue;
        }
        if (line.empty()) {
            current = nullptr;
            continue;
        }
        if (current == nullptr) {
            throw ParseError("level rows must follow a '; <index>' header", line_no, 1);
        }
        current->rows.push_back(line);
    }
    for (const auto &block : blocks) {
        if (block.rows.empty()) {
            throw ParseError("level block has no rows", block.first_row_line - 1, 1);
        }
    }
    return blocks;
}

auto format_level_block(const std::string &index, const std::vector<std::string> &rows) -> std::string {
    return "; " + index + "\n" + join_rows(rows) + "\n";
}

void check_rectangular(const LevelBlock &block) {
    const auto width = block.rows.front().size();
    for (std::size_t r = 1; r < block.rows.size(); ++r) {
        if (block.rows[r].size() != width) {
            throw ParseError("ragged row: every row of a level must have the same width",
                             block.first_row_line + static_cast<int>(r),
                             static_cast<int>(std::min(width, block.rows[r].size())) + 1);
        }
    }
}

}  // namespace sgphs::envs
