//! Unit conversions used at the boundary (mm, kPa, degrees, kg).

/// Standard gravity used to turn pulling masses into forces, in m/s².
pub const GRAVITY: f64 = 9.81;

pub const MM_PER_M: f64 = 1000.0;
pub const PA_PER_KPA: f64 = 1000.0;

pub fn mm_to_m(mm: f64) -> f64 {
    mm / MM_PER_M
}

pub fn m_to_mm(m: f64) -> f64 {
    m * MM_PER_M
}

pub fn kpa_to_pa(kpa: f64) -> f64 {
    kpa * PA_PER_KPA
}

pub fn pa_to_kpa(pa: f64) -> f64 {
    pa / PA_PER_KPA
}

/// N/m to N/mm.
pub fn per_m_to_per_mm(k: f64) -> f64 {
    k / MM_PER_M
}

/// N/mm to N/m.
pub fn per_mm_to_per_m(k: f64) -> f64 {
    k * MM_PER_M
}

/// Weight of a hanging mass, in N.
pub fn mass_to_force(kg: f64) -> f64 {
    kg * GRAVITY
}
