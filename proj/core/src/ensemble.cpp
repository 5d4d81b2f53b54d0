#include "chansim/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "chansim/constants.hpp"
#include "chansim/crystal.hpp"

namespace chansim {

void RecordTable::resize(std::size_t n) {
    x.resize(n);
    y.resize(n);
    theta_x.resize(n);
    theta_y.resize(n);
    e_exit.resize(n);
    entry_x.resize(n);
    entry_y.resize(n);
    flag.resize(n);
}

void RecordTable::set(std::size_t i, const ExitRecord& r) {
    x[i] = r.x;
    y[i] = r.y;
    theta_x[i] = r.theta_x;
    theta_y[i] = r.theta_y;
    e_exit[i] = r.e_exit;
    entry_x[i] = r.entry_x;
    entry_y[i] = r.entry_y;
    flag[i] = static_cast<std::uint8_t>(r.flag) |
              (r.loss_clamped ? 0x80 : 0x00);
}

ExitRecord RecordTable::row(std::size_t i) const {
    ExitRecord r;
    r.proton_index = i;
    r.x = x[i];
    r.y = y[i];
    r.theta_x = theta_x[i];
    r.theta_y = theta_y[i];
    r.e_exit = e_exit[i];
    r.entry_x = entry_x[i];
    r.entry_y = entry_y[i];
    r.flag = static_cast<ExitFlag>(flag[i] & 0x7F);
    r.loss_clamped = (flag[i] & 0x80) != 0;
    return r;
}

std::uint64_t RecordTable::channeled_count() const {
    std::uint64_t n = 0;
    for (auto f : flag)
        if ((f & 0x7F) == static_cast<std::uint8_t>(ExitFlag::channeled)) ++n;
    return n;
}

void RecordTable::count_clamped() {
    loss_clamped_ = 0;
    for (auto f : flag)
        if (f & 0x80) ++loss_clamped_;
}

ProtonState sample_initial(const BeamConfig& beam, const ChannelGeometry& geometry,
                           std::uint64_t index) {
    if (index >= beam.n_protons && beam.n_protons > 0)
        throw std::out_of_range("sample_initial: index beyond n_protons");
    RngStream rng(beam.seed, index);

    // Uniform impact parameters over the channel cell: an axis-aligned square
    // in the frame rotated 45 degrees to the string mesh, the cell corners
    // being the four nearest strings.
    const double half_diag =
        geometry.channel_half_diagonal() * beam.impact_window_scale;
    const double half_side = half_diag / std::sqrt(2.0);
    const double u = rng.uniform(-half_side, half_side);
    const double w = rng.uniform(-half_side, half_side);
    constexpr double inv_r2 = 0.70710678118654752440;

    ProtonState s;
    s.x = (u - w) * inv_r2;
    s.y = (u + w) * inv_r2;
    s.e = beam.energy_eV;

    const double psi_c_rad = critical_angle(geometry.z1, geometry.z2,
                                            geometry.d_string, beam.energy_eV) * 1e-3;
    const double sigma = beam.divergence_mrad * 1e-3 / std::sqrt(2.0);
    s.phi_x = beam.tilt_fraction * psi_c_rad + sigma * rng.normal();
    s.phi_y = sigma * rng.normal();
    return s;
}

namespace {

void run_range(const BeamConfig& beam, const PotentialField& field,
               double length_nm, const PropagationOptions& options, int threads,
               std::uint64_t begin, std::uint64_t end, RecordTable& out) {
    const std::uint64_t n = end - begin;
    out.resize(n);
    if (n == 0) return;

    int workers = threads > 0 ? threads
                              : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (static_cast<std::uint64_t>(workers) > n)
        workers = static_cast<int>(n);

    std::atomic<std::uint64_t> cursor{begin};
    constexpr std::uint64_t grain = 256;

    auto work = [&]() {
        for (;;) {
            const std::uint64_t lo = cursor.fetch_add(grain);
            if (lo >= end) break;
            const std::uint64_t hi = std::min(end, lo + grain);
            for (std::uint64_t i = lo; i < hi; ++i) {
                RngStream rng(beam.seed, i);
                ProtonState init = sample_initial(beam, field.geometry(), i);
                ExitRecord rec = propagate(init, field, length_nm, options, rng);
                rec.proton_index = i;
                rec.entry_x = init.x;
                rec.entry_y = init.y;
                out.set(i - begin, rec);
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    out.count_clamped();
}

}  // namespace

RecordTable run_ensemble(const BeamConfig& beam, const PotentialField& field,
                         double length_nm, const PropagationOptions& options,
                         int threads) {
    RecordTable table;
    run_range(beam, field, length_nm, options, threads, 0, beam.n_protons, table);
    return table;
}

void run_ensemble_chunked(
    const BeamConfig& beam, const PotentialField& field, double length_nm,
    const PropagationOptions& options, int threads, std::uint64_t chunk_size,
    const std::function<void(const RecordTable&, std::uint64_t)>& sink) {
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");
    for (std::uint64_t base = 0; base < beam.n_protons; base += chunk_size) {
        const std::uint64_t end = std::min(beam.n_protons, base + chunk_size);
        RecordTable chunk;
        run_range(beam, field, length_nm, options, threads, base, end, chunk);
        sink(chunk, base);
    }
}

double reduced_thickness(double length_nm, double energy_eV,
                         const PotentialField& field, double calibration) {
    if (!(length_nm > 0.0) || !(energy_eV > 0.0))
        throw std::domain_error("reduced_thickness: inputs must be positive");
    const double f = field.transverse_frequency() * calibration;
    return f * length_nm / constants::proton_speed(energy_eV);
}

}  // namespace chansim
