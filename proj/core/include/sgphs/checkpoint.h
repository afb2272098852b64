#ifndef SGPHS_CHECKPOINT_H_
#define SGPHS_CHECKPOINT_H_

#include <sgphs/models.h>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace sgphs {

inline constexpr int kCheckpointFormatVersion = 1;

struct CheckpointMeta {
    int iteration = 0;
    std::int64_t budget = 0;
    std::uint64_t model_seed = 0;
    std::uint64_t train_seed = 0;
    bool final = false;

    auto operator==(const CheckpointMeta &) const -> bool = default;
};

struct LoadedCheckpoint {
    std::unique_ptr<PolicyModel> model;
    CheckpointMeta meta;
};

// Layout: "SGPHS-CKPT <n>\n", an n-byte JSON manifest, then every array as
// little-endian float32 in manifest order. Arrays are the parameters of each
// module followed by its Adam moments; each carries a CRC-32.
[[nodiscard]] auto serialize_checkpoint(PolicyModel &model, const CheckpointMeta &meta) -> std::string;
[[nodiscard]] auto parse_checkpoint(std::string_view bytes) -> LoadedCheckpoint;

// Written through a temporary file and renamed, so a failed save leaves no file.
void save_checkpoint(const std::string &path, PolicyModel &model, const CheckpointMeta &meta);
[[nodiscard]] auto load_checkpoint(const std::string &path) -> LoadedCheckpoint;

[[nodiscard]] auto read_file(const std::string &path) -> std::string;
void write_file_atomic(const std::string &path, std::string_view contents);

}  // namespace sgphs

#endif  // SGPHS_CHECKPOINT_H_
