#include "resonant/checksum.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "resonant/errors.hpp"

namespace resonant {

namespace {

struct Digest {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};

    Digest() {
        if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
            throw Error("sha256: digest initialisation failed");
    }
    void update(const void* d, std::size_t n) { EVP_DigestUpdate(ctx.get(), d, n); }
    std::string hex() {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned len = 0;
        EVP_DigestFinal_ex(ctx.get(), md, &len);
        static constexpr char digits[] = "0123456789abcdef";
        std::string s(2 * len, '0');
        for (unsigned i = 0; i < len; ++i) {
            s[2 * i] = digits[md[i] >> 4];
            s[2 * i + 1] = digits[md[i] & 15];
        }
        return s;
    }
};

}  // namespace

std::string sha256_hex(const void* data, std::size_t n) {
    Digest d;
    d.update(data, n);
    return d.hex();
}

std::string sha256_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open " + p.string());
    Digest d;
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return d.hex();
}

}  // namespace resonant
