#ifndef SGPHS_ENVS_LEVEL_TEXT_H_
#define SGPHS_ENVS_LEVEL_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace sgphs::envs {

// One level of a "; <index>" block file:
//
//   ; 0
//   #####
//   #@ G#
//   #####
//   <blank line>
struct LevelBlock {
    std::string index;
    std::vector<std::string> rows;
    int first_row_line = 0;  // 1-based file line of rows[0]
};

[[nodiscard]] auto parse_level_blocks(std::string_view text) -> std::vector<LevelBlock>;
[[nodiscard]] auto format_level_block(const std::string &index, const std::vector<std::string> &rows) -> std::string;

// Rows of equal length; throws ParseError at the first ragged row.
void check_rectangular(const LevelBlock &block);

[[nodiscard]] auto split_rows(std::string_view text) -> std::vector<std::string>;
[[nodiscard]] auto join_rows(const std::vector<std::string> &rows) -> std::string;

}  // namespace sgphs::envs

#endif  // SGPHS_ENVS_LEVEL_TEXT_H_
