#include "psrgan/generator.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "json.hpp"

namespace psrgan {

namespace {

void append(std::vector<double>& out, const Matrix& m) {
    out.insert(out.end(), m.data.begin(), m.data.end());
}
void append(std::vector<double>& out, const std::vector<double>& v) {
    out.insert(out.end(), v.begin(), v.end());
}
void take(const std::vector<double>& flat, std::size_t& pos, Matrix& m) {
    std::copy(flat.begin() + pos, flat.begin() + pos + m.data.size(), m.data.begin());
    pos += m.data.size();
}
void take(const std::vector<double>& flat, std::size_t& pos, std::vector<double>& v) {
    std::copy(flat.begin() + pos, flat.begin() + pos + v.size(), v.begin());
    pos += v.size();
}

nlohmann::json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.data.size()) throw ShapeMismatch("matrix data size mismatch");
    m.data = data;
    return m;
}

} // namespace

GeneratorParams GeneratorParams::zeros(const GeneratorConfig& cfg) {
    GeneratorParams p;
    p.cfg = cfg;
    const std::size_t h = cfg.hidden_size;
    const std::size_t in = cfg.input_size;
    p.W_i = p.W_f = p.W_c = p.W_o = Matrix(h, in);
    p.R_i = p.R_f = p.R_c = p.R_o = Matrix(h, h);
    p.V_i.assign(h, 0.0);
    p.V_f.assign(h, 0.0);
    p.V_o.assign(h, 0.0);
    p.b_i.assign(h, 0.0);
    p.b_f.assign(h, 0.0);
    p.b_c.assign(h, 0.0);
    p.b_o.assign(h, 0.0);
    p.W_y.assign(h, 0.0);
    p.b_y = 0.0;
    return p;
}

GeneratorParams GeneratorParams::init(const GeneratorConfig& cfg, Rng& rng) {
    GeneratorParams p = zeros(cfg);
    const std::size_t h = cfg.hidden_size;
    const std::size_t in = cfg.input_size;
    for (Matrix* m : {&p.W_i, &p.W_f, &p.W_c, &p.W_o}) *m = xavier_init(h, in, rng);
    for (Matrix* m : {&p.R_i, &p.R_f, &p.R_c, &p.R_o}) *m = xavier_init(h, h, rng);
    if (cfg.peephole)
        for (auto* v : {&p.V_i, &p.V_f, &p.V_o}) *v = xavier_init_vec(h, 2 * h, rng);
    p.W_y = xavier_init_vec(h, h + 1, rng);
    p.b_y = 0.0;
    return p;
}

std::size_t GeneratorParams::flat_size() const {
    const std::size_t h = cfg.hidden_size;
    const std::size_t in = cfg.input_size;
    return 4 * h * in + 4 * h * h + 3 * h + 4 * h + h + 1;
}

std::vector<double> GeneratorParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(flat_size());
    for (const Matrix* m : {&W_i, &W_f, &W_c, &W_o, &R_i, &R_f, &R_c, &R_o})
        append(flat, *m);
    for (const std::vector<double>* v : {&V_i, &V_f, &V_o, &b_i, &b_f, &b_c, &b_o, &W_y})
        append(flat, *v);
    flat.push_back(b_y);
    return flat;
}

void GeneratorParams::from_flat(const std::vector<double>& flat) {
    if (flat.size() != flat_size()) throw ShapeMismatch("from_flat size mismatch");
    std::size_t pos = 0;
    for (Matrix* m : {&W_i, &W_f, &W_c, &W_o, &R_i, &R_f, &R_c, &R_o}) take(flat, pos, *m);
    for (std::vector<double>* v : {&V_i, &V_f, &V_o, &b_i, &b_f, &b_c, &b_o, &W_y})
        take(flat, pos, *v);
    b_y = flat[pos];
}

void GeneratorParams::axpy(double alpha, const GeneratorParams& other) {
    auto mats = [](GeneratorParams& p) {
        return std::array{&p.W_i, &p.W_f, &p.W_c, &p.W_o, &p.R_i, &p.R_f, &p.R_c, &p.R_o};
    };
    auto vecs = [](GeneratorParams& p) {
        return std::array{&p.V_i, &p.V_f, &p.V_o, &p.b_i, &p.b_f, &p.b_c, &p.b_o, &p.W_y};
    };
    auto om = mats(const_cast<GeneratorParams&>(other));
    auto tm = mats(*this);
    for (std::size_t k = 0; k < tm.size(); ++k) {
        if (!tm[k]->same_shape(*om[k])) throw ShapeMismatch("axpy matrix shape");
        for (std::size_t i = 0; i < tm[k]->data.size(); ++i)
            tm[k]->data[i] += alpha * om[k]->data[i];
    }
    auto ov = vecs(const_cast<GeneratorParams&>(other));
    auto tv = vecs(*this);
    for (std::size_t k = 0; k < tv.size(); ++k) {
        if (tv[k]->size() != ov[k]->size()) throw ShapeMismatch("axpy vector shape");
        for (std::size_t i = 0; i < tv[k]->size(); ++i)
            (*tv[k])[i] += alpha * (*ov[k])[i];
    }
    b_y += alpha * other.b_y;
}

double GeneratorParams::l2_norm() const {
    double sum = 0.0;
    for (double v : to_flat()) sum += v * v;
    return std::sqrt(sum);
}

void GeneratorParams::scale(double alpha) {
    for (Matrix* m : {&W_i, &W_f, &W_c, &W_o, &R_i, &R_f, &R_c, &R_o})
        for (double& v : m->data) v *= alpha;
    for (std::vector<double>* v : {&V_i, &V_f, &V_o, &b_i, &b_f, &b_c, &b_o, &W_y})
        for (double& x : *v) x *= alpha;
    b_y *= alpha;
}

std::string GeneratorParams::to_json() const {
    nlohmann::json j;
    j["format"] = "psrgan-generator";
    j["version"] = 1;
    j["input_size"] = cfg.input_size;
    j["hidden_size"] = cfg.hidden_size;
    j["peephole"] = cfg.peephole;
    j["W_i"] = matrix_to_json(W_i);
    j["W_f"] = matrix_to_json(W_f);
    j["W_c"] = matrix_to_json(W_c);
    j["W_o"] = matrix_to_json(W_o);
    j["R_i"] = matrix_to_json(R_i);
    j["R_f"] = matrix_to_json(R_f);
    j["R_c"] = matrix_to_json(R_c);
    j["R_o"] = matrix_to_json(R_o);
    j["V_i"] = V_i;
    j["V_f"] = V_f;
    j["V_o"] = V_o;
    j["b_i"] = b_i;
    j["b_f"] = b_f;
    j["b_c"] = b_c;
    j["b_o"] = b_o;
    j["W_y"] = W_y;
    j["b_y"] = b_y;
    return j.dump(2);
}

GeneratorParams GeneratorParams::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "psrgan-generator")
        throw InvalidParams("not a generator parameter file");
    GeneratorConfig cfg;
    cfg.input_size = j.at("input_size").get<std::size_t>();
    cfg.hidden_size = j.at("hidden_size").get<std::size_t>();
    cfg.peephole = j.at("peephole").get<bool>();
    GeneratorParams p = zeros(cfg);
    p.W_i = matrix_from_json(j.at("W_i"));
    p.W_f = matrix_from_json(j.at("W_f"));
    p.W_c = matrix_from_json(j.at("W_c"));
    p.W_o = matrix_from_json(j.at("W_o"));
    p.R_i = matrix_from_json(j.at("R_i"));
    p.R_f = matrix_from_json(j.at("R_f"));
    p.R_c = matrix_from_json(j.at("R_c"));
    p.R_o = matrix_from_json(j.at("R_o"));
    for (auto [key, dst] : {std::pair{"V_i", &p.V_i}, {"V_f", &p.V_f}, {"V_o", &p.V_o},
                            {"b_i", &p.b_i}, {"b_f", &p.b_f}, {"b_c", &p.b_c},
                            {"b_o", &p.b_o}, {"W_y", &p.W_y}}) {
        *dst = j.at(key).get<std::vector<double>>();
        if (dst->size() != cfg.hidden_size)
            throw ShapeMismatch(std::string("vector field size: ") + key);
    }
    p.b_y = j.at("b_y").get<double>();
    const std::size_t h = cfg.hidden_size;
    for (const Matrix* m : {&p.W_i, &p.W_f, &p.W_c, &p.W_o})
        if (m->rows != h || m->cols != cfg.input_size)
            throw ShapeMismatch("input weight shape");
    for (const Matrix* m : {&p.R_i, &p.R_f, &p.R_c, &p.R_o})
        if (m->rows != h || m->cols != h) throw ShapeMismatch("recurrent weight shape");
    return p;
}

LstmState LstmState::zeros(std::size_t hidden) {
    return {std::vector<double>(hidden, 0.0), std::vector<double>(hidden, 0.0)};
}

std::pair<LstmState, GateRecord> lstm_cell_forward(const GeneratorParams& params,
                                                   const std::vector<double>& x_t,
                                                   const LstmState& prev) {
    const std::size_t h = params.cfg.hidden_size;
    if (x_t.size() != params.cfg.input_size || prev.h.size() != h || prev.c.size() != h)
        throw ShapeMismatch("lstm_cell_forward input shapes");

    GateRecord rec;
    rec.x = x_t;
    rec.h_prev = prev.h;
    rec.c_prev = prev.c;

    auto pre_i = matvec(params.W_i, x_t);
    auto rec_i = matvec(params.R_i, prev.h);
    auto pre_f = matvec(params.W_f, x_t);
    auto rec_f = matvec(params.R_f, prev.h);
    auto pre_c = matvec(params.W_c, x_t);
    auto rec_c = matvec(params.R_c, prev.h);
    auto pre_o = matvec(params.W_o, x_t);
    auto rec_o = matvec(params.R_o, prev.h);

    const bool peep = params.cfg.peephole;
    rec.i.resize(h);
    rec.f.resize(h);
    rec.chat.resize(h);
    rec.c.resize(h);
    rec.o.resize(h);
    rec.h.resize(h);
    for (std::size_t u = 0; u < h; ++u) {
        double zi = pre_i[u] + rec_i[u] + params.b_i[u];
        double zf = pre_f[u] + rec_f[u] + params.b_f[u];
        if (peep) {
            zi += params.V_i[u] * prev.c[u];
            zf += params.V_f[u] * prev.c[u];
        }
        rec.i[u] = sigmoid(zi);
        rec.f[u] = sigmoid(zf);
        rec.chat[u] = std::tanh(pre_c[u] + rec_c[u] + params.b_c[u]);
        rec.c[u] = rec.i[u] * rec.chat[u] + rec.f[u] * prev.c[u];
        double zo = pre_o[u] + rec_o[u] + params.b_o[u];
        if (peep) zo += params.V_o[u] * rec.c[u];
        rec.o[u] = sigmoid(zo);
        rec.h[u] = rec.o[u] * std::tanh(rec.c[u]);
    }
    LstmState next{rec.h, rec.c};
    return {std::move(next), std::move(rec)};
}

std::pair<double, ForwardCache> generator_forward(const GeneratorParams& params,
                                                  const std::vector<double>& window) {
    if (window.empty()) throw ShapeMismatch("empty window");
    ForwardCache cache;
    cache.hidden_size = params.cfg.hidden_size;
    cache.input_size = params.cfg.input_size;
    cache.steps.reserve(window.size());
    LstmState state = LstmState::zeros(params.cfg.hidden_size);
    for (double x : window) {
        auto [next, rec] = lstm_cell_forward(params, std::vector<double>{x}, state);
        state = std::move(next);
        cache.steps.push_back(std::move(rec));
    }
    double pred = params.b_y;
    for (std::size_t u = 0; u < state.h.size(); ++u) pred += params.W_y[u] * state.h[u];
    return {pred, std::move(cache)};
}

GeneratorParams generator_backward(const GeneratorParams& params,
                                   const ForwardCache& cache, double d_prediction) {
    const std::size_t h = params.cfg.hidden_size;
    if (cache.hidden_size != h || cache.input_size != params.cfg.input_size ||
        cache.steps.empty())
        throw StaleCache("cache does not match params");

    GeneratorParams g = GeneratorParams::zeros(params.cfg);
    const bool peep = params.cfg.peephole;

    // output head
    const auto& h_last = cache.steps.back().h;
    std::vector<double> dh(h);
    for (std::size_t u = 0; u < h; ++u) {
        g.W_y[u] = d_prediction * h_last[u];
        dh[u] = d_prediction * params.W_y[u];
    }
    g.b_y = d_prediction;

    std::vector<double> dc(h, 0.0);
    std::vector<double> d_pre_i(h), d_pre_f(h), d_pre_c(h), d_pre_o(h);
    for (std::size_t t = cache.steps.size(); t-- > 0;) {
        const GateRecord& r = cache.steps[t];
        for (std::size_t u = 0; u < h; ++u) {
            const double tanh_c = std::tanh(r.c[u]);
            const double d_o = dh[u] * tanh_c;
            d_pre_o[u] = d_o * r.o[u] * (1.0 - r.o[u]);
            double dcu = dc[u] + dh[u] * r.o[u] * (1.0 - tanh_c * tanh_c);
            if (peep) dcu += params.V_o[u] * d_pre_o[u];
            const double d_i = dcu * r.chat[u];
            const double d_chat = dcu * r.i[u];
            const double d_f = dcu * r.c_prev[u];
            d_pre_i[u] = d_i * r.i[u] * (1.0 - r.i[u]);
            d_pre_f[u] = d_f * r.f[u] * (1.0 - r.f[u]);
            d_pre_c[u] = d_chat * (1.0 - r.chat[u] * r.chat[u]);
            double dc_prev = dcu * r.f[u];
            if (peep) {
                dc_prev += params.V_i[u] * d_pre_i[u] + params.V_f[u] * d_pre_f[u];
                g.V_i[u] += d_pre_i[u] * r.c_prev[u];
                g.V_f[u] += d_pre_f[u] * r.c_prev[u];
                g.V_o[u] += d_pre_o[u] * r.c[u];
            }
            dc[u] = dc_prev;
            g.b_i[u] += d_pre_i[u];
            g.b_f[u] += d_pre_f[u];
            g.b_c[u] += d_pre_c[u];
            g.b_o[u] += d_pre_o[u];
        }
        add_outer(g.W_i, 1.0, d_pre_i, r.x);
        add_outer(g.W_f, 1.0, d_pre_f, r.x);
        add_outer(g.W_c, 1.0, d_pre_c, r.x);
        add_outer(g.W_o, 1.0, d_pre_o, r.x);
        add_outer(g.R_i, 1.0, d_pre_i, r.h_prev);
        add_outer(g.R_f, 1.0, d_pre_f, r.h_prev);
        add_outer(g.R_c, 1.0, d_pre_c, r.h_prev);
        add_outer(g.R_o, 1.0, d_pre_o, r.h_prev);

        auto dh_prev = matvec_t(params.R_i, d_pre_i);
        const auto df = matvec_t(params.R_f, d_pre_f);
        const auto dcn = matvec_t(params.R_c, d_pre_c);
        const auto don = matvec_t(params.R_o, d_pre_o);
        for (std::size_t u = 0; u < h; ++u) dh_prev[u] += df[u] + dcn[u] + don[u];
        dh = std::move(dh_prev);
    }
    return g;
}

} // namespace psrgan
