#include "inr/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "inr/array_io.hpp"
#include "inr/error.hpp"

namespace inr {

namespace {

constexpr char kMagic[8] = {'I', 'N', 'R', 'C', 'K', 'P', 'T', '1'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void put_doubles(const std::vector<double>& v) {
    put<std::int64_t>(static_cast<std::int64_t>(v.size()));
    for (double d : v) put(d);
  }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > data_.size()) throw InvalidInput("checkpoint: truncated file");
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::vector<double> get_doubles() {
    const auto n = get<std::int64_t>();
    if (n < 0 || static_cast<std::size_t>(n) > (data_.size() - pos_) / sizeof(double)) {
      throw InvalidInput("checkpoint: bad array length");
    }
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& d : v) d = get<double>();
    return v;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

void put_features(Writer& w, const FourierFeatureMap& f) {
  w.put(f.sigma());
  w.put<std::uint64_t>(f.seed());
  w.put_doubles(f.matrix());
}

FourierFeatureMap get_features(Reader& r) {
  const auto sigma = r.get<double>();
  const auto seed = r.get<std::uint64_t>();
  return FourierFeatureMap(r.get_doubles(), sigma, seed);
}

void put_net(Writer& w, const SirenModel& net) {
  const auto& d = net.dims();
  for (Index v : {d.in_dim, d.hidden, d.hidden_layers, d.out_dim}) w.put<std::int64_t>(v);
  w.put(net.w0());
  w.put<std::uint64_t>(net.seed());
  w.put_doubles(net.params());
}

SirenModel get_net(Reader& r) {
  SirenDims d;
  d.in_dim = r.get<std::int64_t>();
  d.hidden = r.get<std::int64_t>();
  d.hidden_layers = r.get<std::int64_t>();
  d.out_dim = r.get<std::int64_t>();
  const auto w0 = r.get<double>();
  const auto seed = r.get<std::uint64_t>();
  return SirenModel(d, w0, seed, r.get_doubles());
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ReconModel& model) {
  Writer w;
  w.str().append(kMagic, sizeof(kMagic));
  for (Index v : {model.rows, model.cols, model.coils}) w.put<std::int64_t>(v);
  put_features(w, model.image_features);
  put_features(w, model.sens_features);
  put_net(w, model.image_net);
  put_net(w, model.sens_net);
  write_file_atomic(path, w.str());
}

ReconModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string data = ss.str();
  if (data.size() < sizeof(kMagic) || std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
    throw InvalidInput(path.string() + " is not a checkpoint");
  }
  Reader r(data.substr(sizeof(kMagic)));
  ReconModel m;
  m.rows = r.get<std::int64_t>();
  m.cols = r.get<std::int64_t>();
  m.coils = r.get<std::int64_t>();
  m.image_features = get_features(r);
  m.sens_features = get_features(r);
  m.image_net = get_net(r);
  m.sens_net = get_net(r);
  if (!r.done()) throw InvalidInput("checkpoint: trailing bytes");
  if (m.image_net.dims().in_dim != m.image_features.output_size() ||
      m.sens_net.dims().in_dim != m.sens_features.output_size() || m.sens_net.dims().out_dim != 2 * m.coils) {
    throw InvalidInput("checkpoint: network and embedding sizes disagree");
  }
  return m;
}

}  // namespace inr
