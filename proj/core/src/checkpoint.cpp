#include <sgphs/checkpoint.h>

#include <sgphs/errors.h>

#include <fmt/format.h>
#include <json.hpp>
#include <zlib.h>

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sgphs {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kMagic = "SGPHS-CKPT ";

struct ArrayView {
    std::string name;
    std::vector<int> shape;
    std::span<double> values;
};

// Every array of the model in file order; ensures optimizer moments exist.
auto collect_arrays(std::vector<ModuleRef> &modules) -> std::vector<ArrayView> {
    std::vector<ArrayView> arrays;
    for (auto &module : modules) {
        for (const auto &p : module.params) {
            arrays.push_back({p.name, p.shape, p.value});
        }
    }
    for (auto &module : modules) {
        module.optimizer->ensure_state(module.params);
        auto &m = module.optimizer->first_moments();
        auto &v = module.optimizer->second_moments();
        for (std::size_t i = 0; i < module.params.size(); ++i) {
            const auto &p = module.params[i];
            arrays.push_back({fmt::format("adam.{}.m.{}", module.name, p.name), p.shape, m[i]});
            arrays.push_back({fmt::format("adam.{}.v.{}", module.name, p.name), p.shape, v[i]});
        }
    }
    return arrays;
}

void append_float32(std::string &out, double value) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(value));
    for (int b = 0; b < 4; ++b) {
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFU));
    }
}

auto read_float32(const char *bytes) -> double {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
        bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[b])) << (8 * b);
    }
    return static_cast<double>(std::bit_cast<float>(bits));
}

auto crc_of(std::string_view bytes) -> std::uint32_t {
    return static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef *>(bytes.data()), static_cast<uInt>(bytes.size())));
}

auto hyperparameters(const ModelConfig &c) -> Json {
    return Json{
        {"hidden_width", c.hidden_width},
        {"hidden_layers", c.hidden_layers},
        {"codebook_size", c.vqvae.codebook_size},
        {"codebook_dim", c.vqvae.codebook_dim},
        {"beta", c.vqvae.beta},
        {"vqvae_hidden_width", c.vqvae.hidden_width},
        {"vqvae_hidden_layers", c.vqvae.hidden_layers},
        {"learning_rate", c.optimizer.learning_rate},
        {"l2", c.optimizer.l2},
        {"adam_beta1", c.optimizer.beta1},
        {"adam_beta2", c.optimizer.beta2},
        {"adam_epsilon", c.optimizer.epsilon},
    };
}

auto config_from(const Json &h) -> ModelConfig {
    ModelConfig c;
    c.hidden_width = h.at("hidden_width").get<int>();
    c.hidden_layers = h.at("hidden_layers").get<int>();
    c.vqvae.codebook_size = h.at("codebook_size").get<int>();
    c.vqvae.codebook_dim = h.at("codebook_dim").get<int>();
    c.vqvae.beta = h.at("beta").get<double>();
    c.vqvae.hidden_width = h.at("vqvae_hidden_width").get<int>();
    c.vqvae.hidden_layers = h.at("vqvae_hidden_layers").get<int>();
    c.optimizer.learning_rate = h.at("learning_rate").get<double>();
    c.optimizer.l2 = h.at("l2").get<double>();
    c.optimizer.beta1 = h.at("adam_beta1").get<double>();
    c.optimizer.beta2 = h.at("adam_beta2").get<double>();
    c.optimizer.epsilon = h.at("adam_epsilon").get<double>();
    return c;
}

}  // namespace

auto serialize_checkpoint(PolicyModel &model, const CheckpointMeta &meta) -> std::string {
    auto modules = model.modules();
    const auto arrays = collect_arrays(modules);

    Json manifest;
    manifest["format_version"] = kCheckpointFormatVersion;
    manifest["model_kind"] = to_string(model.kind());
    manifest["observation_shape"] = model.observation_shape();
    manifest["action_count"] = model.action_count();
    manifest["hyperparameters"] = hyperparameters(model.config());
    manifest["seeds"] = Json{{"model", meta.model_seed}, {"train", meta.train_seed}};
    manifest["iteration"] = meta.iteration;
    manifest["budget"] = meta.budget;
    manifest["final"] = meta.final;
    Json optimizers = Json::array();
    for (const auto &module : modules) {
        optimizers.push_back(Json{{"module", module.name}, {"step", module.optimizer->step_count()}});
    }
    manifest["optimizers"] = optimizers;

    std::string payload;
    Json entries = Json::array();
    for (const auto &array : arrays) {
        std::string bytes;
        bytes.reserve(array.values.size() * 4);
        for (const double v : array.values) {
            append_float32(bytes, v);
        }
        entries.push_back(
            Json{{"name", array.name}, {"shape", array.shape}, {"bytes", bytes.size()}, {"crc32", crc_of(bytes)}});
        payload += bytes;
    }
    manifest["arrays"] = entries;

    const std::string text = manifest.dump(2) + "\n";
    return fmt::format("{}{}\n", kMagic, text.size()) + text + payload;
}

auto parse_checkpoint(std::string_view bytes) -> LoadedCheckpoint {
    if (!bytes.starts_with(kMagic)) {
        throw IoError("not a checkpoint file (missing SGPHS-CKPT header)");
    }
    const auto newline = bytes.find('\n');
    if (newline == std::string_view::npos) {
        throw IoError("truncated checkpoint header");
    }
    std::size_t manifest_size = 0;
    try {
        manifest_size = std::stoull(std::string(bytes.substr(kMagic.size(), newline - kMagic.size())));
    } catch (const std::exception &) {
        throw IoError("malformed checkpoint header");
    }
    const std::size_t manifest_start = newline + 1;
    if (bytes.size() < manifest_start + manifest_size) {
        throw IoError("truncated checkpoint manifest");
    }
    Json manifest;
    try {
        manifest = Json::parse(bytes.substr(manifest_start, manifest_size));
    } catch (const Json::exception &e) {
        throw IoError(fmt::format("checkpoint manifest is not valid JSON: {}", e.what()));
    }

    try {
        const int version = manifest.at("format_version").get<int>();
        if (version != kCheckpointFormatVersion) {
            throw VersionMismatchError(version, kCheckpointFormatVersion);
        }
        LoadedCheckpoint loaded;
        loaded.meta.iteration = manifest.at("iteration").get<int>();
        loaded.meta.budget = manifest.at("budget").get<std::int64_t>();
        loaded.meta.model_seed = manifest.at("seeds").at("model").get<std::uint64_t>();
        loaded.meta.train_seed = manifest.at("seeds").at("train").get<std::uint64_t>();
        loaded.meta.final = manifest.at("final").get<bool>();
        loaded.model = make_model(parse_model_kind(manifest.at("model_kind").get<std::string>()),
                                  config_from(manifest.at("hyperparameters")),
                                  manifest.at("observation_shape").get<std::vector<int>>(),
                                  manifest.at("action_count").get<int>(), loaded.meta.model_seed);

        auto modules = loaded.model->modules();
        for (const auto &entry : manifest.at("optimizers")) {
            const auto name = entry.at("module").get<std::string>();
            const auto it = std::ranges::find(modules, name, &ModuleRef::name);
            if (it == modules.end()) {
                throw IoError(fmt::format("checkpoint names unknown module '{}'", name));
            }
            it->optimizer->set_step_count(entry.at("step").get<std::int64_t>());
        }
        const auto arrays = collect_arrays(modules);
        const auto &entries = manifest.at("arrays");
        if (entries.size() != arrays.size()) {
            throw IoError(fmt::format("checkpoint holds {} arrays, model expects {}", entries.size(), arrays.size()));
        }
        std::size_t offset = manifest_start + manifest_size;
        for (std::size_t i = 0; i < arrays.size(); ++i) {
            const auto &entry = entries[i];
            const auto &array = arrays[i];
            if (entry.at("name").get<std::string>() != array.name ||
                entry.at("shape").get<std::vector<int>>() != array.shape) {
                throw IoError(fmt::format("checkpoint array {} does not match model array '{}'", i, array.name));
            }
            const auto size = entry.at("bytes").get<std::size_t>();
            if (size != array.values.size() * 4 || offset + size > bytes.size()) {
                throw IoError(fmt::format("checkpoint array '{}' has the wrong byte length", array.name));
            }
            const auto data = bytes.substr(offset, size);
            if (crc_of(data) != entry.at("crc32").get<std::uint32_t>()) {
                throw IoError(fmt::format("checksum mismatch in checkpoint array '{}'", array.name));
            }
            for (std::size_t j = 0; j < array.values.size(); ++j) {
                array.values[j] = read_float32(data.data() + 4 * j);
            }
            offset += size;
        }
        if (offset != bytes.size()) {
            throw IoError("trailing bytes after the last checkpoint array");
        }
        return loaded;
    } catch (const Json::exception &e) {
        throw IoError(fmt::format("checkpoint manifest is incomplete: {}", e.what()));
    }
}

auto read_file(const std::string &path) -> std::string {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file_atomic(const std::string &path, std::string_view contents) {
    const std::filesystem::path target(path);
    const auto parent = target.has_parent_path() ? target.parent_path() : std::filesystem::path(".");
    if (!std::filesystem::is_directory(parent)) {
        throw IoError(fmt::format("output directory '{}' does not exist", parent.string()));
    }
    const auto temporary = target.string() + ".tmp";
    {
        std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError(fmt::format("cannot write '{}'", temporary));
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            std::filesystem::remove(temporary);
            throw IoError(fmt::format("short write to '{}'", temporary));
        }
    }
    std::error_code ec;
    std::filesystem::rename(temporary, target, ec);
    if (ec) {
        std::filesystem::remove(temporary);
        throw IoError(fmt::format("cannot move checkpoint into place at '{}': {}", path, ec.message()));
    }
}

void save_checkpoint(const std::string &path, PolicyModel &model, const CheckpointMeta &meta) {
    write_file_atomic(path, serialize_checkpoint(model, meta));
}

auto load_checkpoint(const std::string &path) -> LoadedCheckpoint {
    return parse_checkpoint(read_file(path));
}

}  // namespace sgphs
