#include "test_problems.h"

#include <sgphs/bootstrap.h>
#include <sgphs/checkpoint.h>
#include <sgphs/errors.h>
#include <sgphs/models.h>

#include <gtest/gtest.h>

#include <filesystem>

namespace sgphs {
namespace {

namespace fs = std::filesystem;

auto tiny_config() -> ModelConfig {
    ModelConfig c;
    c.hidden_width = 6;
    c.hidden_layers = 1;
    c.vqvae.codebook_size = 2;
    c.vqvae.codebook_dim = 3;
    c.vqvae.hidden_width = 6;
    c.vqvae.hidden_layers = 1;
    return c;
}

// A bundle with non-trivial Adam state.
auto trained_bundle() -> std::unique_ptr<PolicyModel> {
    const auto problem = testing::chain_problem(6);
    auto model = make_model(ModelKind::subgoal_bundle, tiny_config(), problem.observation_shape(),
                            problem.action_count(), 3);
    Trajectory t;
    t.states.push_back(problem.initial_state());
    for (int i = 0; i < 6; ++i) {
        t.states.push_back(*problem.transition(t.states.back(), 0));
        t.actions.push_back(0);
    }
    std::mt19937_64 rng(1);
    SegmentStats stats;
    TrainCounters counters;
    train_from_solution(*model, problem, t, stats, rng, TrainConfig{}, counters);
    return model;
}

auto temp_dir() -> fs::path {
    const auto dir = fs::temp_directory_path() / ("sgphs_ckpt_" + std::to_string(::testing::UnitTest::GetInstance()
                                                                                     ->random_seed()) +
                                                  "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
    return dir;
}

TEST(Checkpoint, RoundTripIsBitIdentical) {
    auto model = trained_bundle();
    const CheckpointMeta meta{4, 8192, 3, 7, true};
    const auto bytes = serialize_checkpoint(*model, meta);
    auto loaded = parse_checkpoint(bytes);
    EXPECT_EQ(loaded.meta, meta);
    EXPECT_EQ(loaded.model->kind(), ModelKind::subgoal_bundle);
    EXPECT_EQ(serialize_checkpoint(*loaded.model, loaded.meta), bytes);
}

TEST(Checkpoint, ValuesAreStoredAsFloat32) {
    auto model = trained_bundle();
    auto loaded = parse_checkpoint(serialize_checkpoint(*model, {}));
    auto original = model->modules();
    auto restored = loaded.model->modules();
    ASSERT_EQ(original.size(), restored.size());
    for (std::size_t m = 0; m < original.size(); ++m) {
        EXPECT_EQ(original[m].optimizer->step_count(), restored[m].optimizer->step_count());
        for (std::size_t p = 0; p < original[m].params.size(); ++p) {
            const auto &a = original[m].params[p].value;
            const auto &b = restored[m].params[p].value;
            ASSERT_EQ(a.size(), b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                EXPECT_EQ(static_cast<double>(static_cast<float>(a[i])), b[i]);
            }
        }
    }
}

TEST(Checkpoint, FlatModelRoundTrip) {
    const auto problem = testing::chain_problem(3);
    auto model =
        make_model(ModelKind::flat_policy, tiny_config(), problem.observation_shape(), problem.action_count(), 5);
    const auto bytes = serialize_checkpoint(*model, {});
    auto loaded = parse_checkpoint(bytes);
    EXPECT_EQ(loaded.model->kind(), ModelKind::flat_policy);
    EXPECT_EQ(serialize_checkpoint(*loaded.model, loaded.meta), bytes);
}

TEST(Checkpoint, VersionMismatchIsReported) {
    auto model = trained_bundle();
    auto bytes = serialize_checkpoint(*model, {});
    const auto pos = bytes.find("\"format_version\": 1");
    ASSERT_NE(pos, std::string::npos);
    bytes.replace(pos, 19, "\"format_version\": 7");
    try {
        (void)parse_checkpoint(bytes);
        FAIL() << "expected VersionMismatchError";
    } catch (const VersionMismatchError &e) {
        EXPECT_EQ(e.found(), 7);
        EXPECT_EQ(e.expected(), kCheckpointFormatVersion);
    }
}

TEST(Checkpoint, CorruptionIsDetected) {
    auto model = trained_bundle();
    const auto bytes = serialize_checkpoint(*model, {});
    auto flipped = bytes;
    flipped[flipped.size() - 3] = static_cast<char>(flipped[flipped.size() - 3] ^ 0x10);
    EXPECT_THROW((void)parse_checkpoint(flipped), IoError);
    EXPECT_THROW((void)parse_checkpoint(bytes.substr(0, bytes.size() - 4)), IoError);
    EXPECT_THROW((void)parse_checkpoint(bytes + "x"), IoError);
    EXPECT_THROW((void)parse_checkpoint("hello"), IoError);
}

TEST(Checkpoint, SaveAndLoadFile) {
    const auto dir = temp_dir();
    auto model = trained_bundle();
    const auto path = (dir / "model.ckpt").string();
    save_checkpoint(path, *model, {1, 2, 3, 4, false});
    EXPECT_FALSE(fs::exists(path + ".tmp"));
    const auto loaded = load_checkpoint(path);
    EXPECT_EQ(loaded.meta.budget, 2);
    EXPECT_EQ(read_file(path), serialize_checkpoint(*model, {1, 2, 3, 4, false}));
    fs::remove_all(dir);
}

TEST(Checkpoint, MissingDirectoryWritesNothing) {
    auto model = trained_bundle();
    const fs::path path = fs::temp_directory_path() / "sgphs_no_such_dir" / "model.ckpt";
    EXPECT_THROW(save_checkpoint(path.string(), *model, {}), IoError);
    EXPECT_FALSE(fs::exists(path.parent_path()));
    EXPECT_THROW((void)load_checkpoint(path.string()), IoError);
}

}  // namespace
}  // namespace sgphs
