#include "resonant/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "json.hpp"

#include "resonant/checksum.hpp"
#include "resonant/errors.hpp"

namespace resonant {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'R', 'S', 'N', 'S'};
constexpr std::size_t kHeader = 4 + 4 + 4 + 4 + 8 + 8;

template <class T>
void put(std::vector<char>& buf, T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf.insert(buf.end(), p, p + sizeof(T));
}

template <class T>
T get(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return v;
}

std::filesystem::path sidecar(const std::filesystem::path& p) { return p.string() + ".json"; }

}  // namespace

void write_snapshot(const std::filesystem::path& path, const FieldState& s, const SnapshotMeta& meta) {
    std::vector<char> head;
    head.insert(head.end(), kMagic, kMagic + 4);
    put<std::uint32_t>(head, kSnapshotVersion);
    put<std::int32_t>(head, s.window().K());
    put<std::uint32_t>(head, static_cast<std::uint32_t>(s.grid().N));
    put<double>(head, s.grid().L);
    put<double>(head, s.t);

    const auto* payload = reinterpret_cast<const char*>(s.data().data());
    const std::size_t bytes = s.data().size() * sizeof(cplx);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    out.write(payload, static_cast<std::streamsize>(bytes));
    if (!out) throw Error("short write to " + path.string());
    out.close();

    nlohmann::ordered_json j;
    j["format"] = "RSNS";
    j["version"] = kSnapshotVersion;
    j["K"] = s.window().K();
    j["N"] = s.grid().N;
    j["L"] = s.grid().L;
    j["t"] = s.t;
    j["payload_bytes"] = bytes;
    j["payload_sha256"] = sha256_hex(payload, bytes);
    j["config_hash"] = meta.config_hash;
    j["conventions"] = {
        {"field_order", "window row-major, j.y outer, j.x inner"},
        {"grid_index", "iy*N+ix, x_k = -L/2 + k*L/N"},
        {"sample_encoding", "complex128 little-endian (re, im)"},
        {"linear_flow", "exp(-i|xi|^2 t) in Fourier space"},
        {"bracket", "<j>^2 = 1 + |j|^2"},
    };
    std::ofstream js(sidecar(path), std::ios::trunc);
    js << j.dump(2) << '\n';
}

FieldState read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open snapshot " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < kHeader) throw FormatError("snapshot header truncated: " + path.string());
    if (std::memcmp(buf.data(), kMagic, 4) != 0) throw FormatError("bad snapshot magic in " + path.string());
    const auto version = get<std::uint32_t>(buf.data() + 4);
    if (version != kSnapshotVersion) throw UnsupportedVersionError(version, kSnapshotVersion);
    const auto K = get<std::int32_t>(buf.data() + 8);
    const auto N = get<std::uint32_t>(buf.data() + 12);
    const auto L = get<double>(buf.data() + 16);
    const auto t = get<double>(buf.data() + 24);
    if (K < 0 || K > 4096 || N < 2 || N > (1u << 16) || !(L > 0))
        throw FormatError("implausible snapshot header in " + path.string());

    FieldState s(BoxGrid{L, static_cast<int>(N)}, FrequencyWindow(K), t);
    const std::size_t bytes = s.data().size() * sizeof(cplx);
    if (buf.size() - kHeader < bytes)
        throw FormatError("snapshot payload truncated: expected " + std::to_string(bytes) + " bytes, found " +
                          std::to_string(buf.size() - kHeader));
    if (buf.size() - kHeader > bytes) throw FormatError("trailing bytes after snapshot payload");
    std::memcpy(s.data().data(), buf.data() + kHeader, bytes);

    if (std::filesystem::exists(sidecar(path))) {
        std::ifstream js(sidecar(path));
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(js);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("unreadable snapshot sidecar: " + std::string(e.what()));
        }
        const std::string want = j.value("payload_sha256", "");
        if (want != sha256_hex(buf.data() + kHeader, bytes))
            throw FormatError("snapshot payload does not match the sidecar checksum");
    }
    return s;
}

FieldState snapshot_roundtrip(const std::filesystem::path& path, const FieldState& s) {
    write_snapshot(path, s);
    return read_snapshot(path);
}

}  // namespace resonant
