#include <zlib.h>

#include "binary_io.hpp"
#include "oraclenet/lstm.hpp"

namespace oraclenet {

namespace {

constexpr std::string_view kWeightsMagic = "ONWT";
constexpr std::uint32_t kWeightsVersion = 1;

std::uint32_t crc_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

// Eigen storage is column-major; the file is row-major.
void write_tensor(detail::ByteWriter& w, const Eigen::MatrixXd& m, int width) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (width == 8) {
                w.le(m(i, j));
            } else {
                w.le(static_cast<float>(m(i, j)));
            }
        }
    }
}

void read_tensor(detail::ByteReader& r, Eigen::MatrixXd& m, int width) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = width == 8 ? r.le<double>() : static_cast<double>(r.le<float>());
        }
    }
}

void write_vector(detail::ByteWriter& w, const Eigen::VectorXd& v, int width) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (width == 8) {
            w.le(v[i]);
        } else {
            w.le(static_cast<float>(v[i]));
        }
    }
}

void read_vector(detail::ByteReader& r, Eigen::VectorXd& v, int width) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = width == 8 ? r.le<double>() : static_cast<double>(r.le<float>());
    }
}

}  // namespace

std::string encode_weights(const LstmNet& net, int float_width) {
    if (float_width != 4 && float_width != 8) {
        throw UsageError("float width must be 4 or 8");
    }
    detail::ByteWriter w;
    w.raw(kWeightsMagic);
    w.le(kWeightsVersion);
    w.le(static_cast<std::uint32_t>(net.dim()));
    w.le(static_cast<std::uint32_t>(net.layer_count()));
    for (int h : net.hidden_sizes()) {
        w.le(static_cast<std::uint32_t>(h));
    }
    w.le(static_cast<std::uint8_t>(float_width));
    for (const auto& l : net.params.layers) {
        write_tensor(w, l.w_input, float_width);
        write_tensor(w, l.w_recurrent, float_width);
        write_vector(w, l.bias, float_width);
    }
    write_tensor(w, net.params.w_out, float_width);
    write_vector(w, net.params.b_out, float_width);
    write_vector(w, net.norm.lo, 8);
    write_vector(w, net.norm.hi, 8);
    w.le(crc_of(w.bytes()));
    return w.take();
}

LstmNet decode_weights(const std::string& bytes, std::optional<int> expected_dim) {
    if (bytes.size() < 4) {
        throw FormatError("weights: truncated file");
    }
    detail::ByteReader r(bytes, "weights");
    if (r.raw(4) != kWeightsMagic) {
        throw FormatError("weights: bad magic");
    }
    if (const auto v = r.le<std::uint32_t>(); v != kWeightsVersion) {
        throw FormatError("weights: unsupported version " + std::to_string(v));
    }
    const auto d = r.le<std::uint32_t>();
    const auto layer_count = r.le<std::uint32_t>();
    if (d == 0 || d > 1024 || layer_count == 0 || layer_count > 64) {
        throw FormatError("weights: implausible shape header");
    }
    if (expected_dim && static_cast<int>(d) != *expected_dim) {
        throw FormatError("weights: shape mismatch, file has d=" + std::to_string(d) + " but d=" +
                          std::to_string(*expected_dim) + " was expected");
    }
    std::vector<int> hidden;
    for (std::uint32_t i = 0; i < layer_count; ++i) {
        const auto h = r.le<std::uint32_t>();
        if (h == 0 || h > 65536) {
            throw FormatError("weights: implausible hidden size");
        }
        hidden.push_back(static_cast<int>(h));
    }
    const int width = r.le<std::uint8_t>();
    if (width != 4 && width != 8) {
        throw FormatError("weights: float width must be 4 or 8");
    }
    // Check the size before allocating anything.
    std::size_t expected = 0;
    {
        std::size_t in = 2 * d;
        for (int h : hidden) {
            expected += (4 * h * in + 4 * h * h + 4 * h) * width;
            in = h;
        }
        expected += (d * in + d) * width + 2 * d * 8 + 4;
    }
    if (r.remaining() != expected) {
        throw FormatError(r.remaining() < expected ? "weights: truncated file" : "weights: trailing bytes");
    }
    const auto body_end = bytes.size() - 4;
    detail::ByteReader crc_reader(std::string_view(bytes).substr(body_end), "weights");
    if (crc_reader.le<std::uint32_t>() != crc_of(std::string_view(bytes).substr(0, body_end))) {
        throw FormatError("weights: CRC mismatch");
    }

    LstmNet net(static_cast<int>(d), hidden,
                Normalizer{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)});
    for (auto& l : net.params.layers) {
        read_tensor(r, l.w_input, width);
        read_tensor(r, l.w_recurrent, width);
        read_vector(r, l.bias, width);
    }
    read_tensor(r, net.params.w_out, width);
    read_vector(r, net.params.b_out, width);
    read_vector(r, net.norm.lo, 8);
    read_vector(r, net.norm.hi, 8);
    if (!net.params.all_finite()) {
        throw FormatError("weights: non-finite parameter");
    }
    return net;
}

void save_weights(const LstmNet& net, const std::string& file, int float_width) {
    detail::write_file(file, encode_weights(net, float_width));
}

LstmNet load_weights(const std::string& file, std::optional<int> expected_dim) {
    return decode_weights(detail::read_file(file), expected_dim);
}

}  // namespace oraclenet
