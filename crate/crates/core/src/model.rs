//! Shared domain types.
//!
//! Everything in here is strict SI: metres, newtons, pascals, radians.
//! Conversions to the millimetre/kPa/degree units used at the command line
//! live in [`crate::units`].
//!
//! All types are immutable value objects. Constructors validate their
//! inputs and reject NaN and infinities; fields are read through accessors
//! so that derived quantities can never drift from the values they were
//! derived from.

use serde::{Deserialize, Serialize};

use crate::error::{finite, non_negative, positive, MechError, Result};

/// Isotropic linear-elastic material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MaterialSpec", into = "MaterialSpec")]
pub struct Material {
    young_modulus: f64,
    poisson_ratio: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialSpec {
    #[serde(rename = "young_modulus_Pa")]
    young_modulus_pa: f64,
    poisson_ratio: f64,
}

impl Material {
    pub fn new(young_modulus: f64, poisson_ratio: f64) -> Result<Self> {
        positive("young_modulus", young_modulus)?;
        finite("poisson_ratio", poisson_ratio)?;
        if !(0.0..0.5).contains(&poisson_ratio) {
            return Err(MechError::domain(
                "poisson_ratio",
                format!("must lie in [0, 0.5), got {poisson_ratio}"),
            ));
        }
        Ok(Self {
            young_modulus,
            poisson_ratio,
        })
    }

    /// Young's modulus in Pa.
    pub fn young_modulus(&self) -> f64 {
        self.young_modulus
    }

    pub fn poisson_ratio(&self) -> f64 {
        self.poisson_ratio
    }

    /// Shear modulus `G = E / (2(1 + ν))`, in Pa.
    pub fn shear_modulus(&self) -> f64 {
        shear_modulus(self)
    }
}

/// Shear modulus of an isotropic material, `G = E / (2(1 + ν))`.
pub fn shear_modulus(material: &Material) -> f64 {
    material.young_modulus / (2.0 * (1.0 + material.poisson_ratio))
}

impl TryFrom<MaterialSpec> for Material {
    type Error = MechError;
    fn try_from(s: MaterialSpec) -> Result<Self> {
        Material::new(s.young_modulus_pa, s.poisson_ratio)
    }
}

impl From<Material> for MaterialSpec {
    fn from(m: Material) -> Self {
        MaterialSpec {
            young_modulus_pa: m.young_modulus,
            poisson_ratio: m.poisson_ratio,
        }
    }
}

/// Rectangular cross-section of width `b` and height `λ·b`.
///
/// The torsion inertia uses the polar-moment approximation
/// `I_p = I·(1 + λ²)`, i.e. `(b h³ + h b³)/12` with the bending axis along
/// the width. The exact St-Venant torsion constant of a rectangle is
/// smaller; the approximation is what makes the closed-form lateral
/// stiffness depend on λ only through `1 + λ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectSectionSpec", into = "RectSectionSpec")]
pub struct RectSection {
    width: f64,
    aspect_ratio: f64,
    inertia: f64,
    polar_inertia: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RectSectionSpec {
    width_m: f64,
    aspect_ratio: f64,
}

impl RectSection {
    pub fn new(width: f64, aspect_ratio: f64) -> Result<Self> {
        derive_section(width, aspect_ratio)
    }

    /// Width `b` in m.
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Aspect ratio `λ = h_sec / b`.
    pub fn aspect_ratio(&self) -> f64 {
        self.aspect_ratio
    }

    /// Section height `λ·b` in m.
    pub fn height(&self) -> f64 {
        self.aspect_ratio * self.width
    }

    /// Bending second moment `λ b⁴ / 12` in m⁴.
    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    /// Torsion inertia `I·(1 + λ²)` in m⁴.
    pub fn polar_inertia(&self) -> f64 {
        self.polar_inertia
    }
}

/// Builds a rectangular section from its width and aspect ratio.
pub fn derive_section(width: f64, aspect_ratio: f64) -> Result<RectSection> {
    positive("width", width)?;
    positive("aspect_ratio", aspect_ratio)?;
    let inertia = aspect_ratio * width.powi(4) / 12.0;
    let polar_inertia = inertia * (1.0 + aspect_ratio * aspect_ratio);
    if !(inertia > 0.0 && inertia.is_finite() && polar_inertia.is_finite()) {
        return Err(MechError::domain(
            "width",
            format!("second moment {inertia} is not representable"),
        ));
    }
    Ok(RectSection {
        width,
        aspect_ratio,
        inertia,
        polar_inertia,
    })
}

impl TryFrom<RectSectionSpec> for RectSection {
    type Error = MechError;
    fn try_from(s: RectSectionSpec) -> Result<Self> {
        derive_section(s.width_m, s.aspect_ratio)
    }
}

impl From<RectSection> for RectSectionSpec {
    fn from(s: RectSection) -> Self {
        RectSectionSpec {
            width_m: s.width,
            aspect_ratio: s.aspect_ratio,
        }
    }
}

/// One bone-like structure: a tendon-threaded chain of rigid segments,
/// idealised as a continuous curved cantilever of constant arc length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlsSpec", into = "BlsSpec")]
pub struct BlsModel {
    material: Material,
    section: RectSection,
    arc_length: f64,
    structure_height: f64,
    segment_length: f64,
    segment_count: u32,
    pretension: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlsSpec {
    material: Material,
    section: RectSection,
    arc_length_m: f64,
    structure_height_m: f64,
    segment_length_m: f64,
    segment_count: u32,
    #[serde(rename = "pretension_N")]
    pretension_n: f64,
}

impl BlsModel {
    /// `arc_length` is the constant `C = R·α`; `structure_height` and
    /// `segment_length` are the `h` and `L` of the working condition
    /// `F_t·h ≥ F_ext·L`; `pretension` is the tendon force `F_t`.
    pub fn new(
        material: Material,
        section: RectSection,
        arc_length: f64,
        structure_height: f64,
        segment_length: f64,
        segment_count: u32,
        pretension: f64,
    ) -> Result<Self> {
        positive("arc_length", arc_length)?;
        positive("structure_height", structure_height)?;
        positive("segment_length", segment_length)?;
        non_negative("pretension", pretension)?;
        if segment_count < 2 {
            return Err(MechError::domain(
                "segment_count",
                format!("must be >= 2, got {segment_count}"),
            ));
        }
        Ok(Self {
            material,
            section,
            arc_length,
            structure_height,
            segment_length,
            segment_count,
            pretension,
        })
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    pub fn section(&self) -> &RectSection {
        &self.section
    }

    /// Arc length `C` in m.
    pub fn arc_length(&self) -> f64 {
        self.arc_length
    }

    pub fn structure_height(&self) -> f64 {
        self.structure_height
    }

    pub fn segment_length(&self) -> f64 {
        self.segment_length
    }

    pub fn segment_count(&self) -> u32 {
        self.segment_count
    }

    /// Tendon pretension `F_t` in N.
    pub fn pretension(&self) -> f64 {
        self.pretension
    }

    /// Flexural rigidity `E·I` in N·m².
    pub fn flexural_rigidity(&self) -> f64 {
        self.material.young_modulus() * self.section.inertia()
    }

    /// Torsional rigidity `G·I_p` in N·m².
    pub fn torsional_rigidity(&self) -> f64 {
        self.material.shear_modulus() * self.section.polar_inertia()
    }

    /// The stiffness scale `E·I / C³` in N/m.
    pub fn stiffness_scale(&self) -> f64 {
        self.flexural_rigidity() / self.arc_length.powi(3)
    }

    pub fn with_pretension(&self, pretension: f64) -> Result<Self> {
        non_negative("pretension", pretension)?;
        Ok(Self {
            pretension,
            ..*self
        })
    }

    pub fn with_arc_length(&self, arc_length: f64) -> Result<Self> {
        positive("arc_length", arc_length)?;
        Ok(Self {
            arc_length,
            ..*self
        })
    }

    /// Replaces Young's modulus so that `E·I / C³` equals `scale`, keeping
    /// geometry and Poisson's ratio. Used to turn a fitted stiffness scale
    /// back into a model.
    pub fn with_stiffness_scale(&self, scale: f64) -> Result<Self> {
        positive("stiffness_scale", scale)?;
        let young = scale * self.arc_length.powi(3) / self.section.inertia();
        let material = Material::new(young, self.material.poisson_ratio())?;
        Ok(Self { material, ..*self })
    }
}

impl TryFrom<BlsSpec> for BlsModel {
    type Error = MechError;
    fn try_from(s: BlsSpec) -> Result<Self> {
        BlsModel::new(
            s.material,
            s.section,
            s.arc_length_m,
            s.structure_height_m,
            s.segment_length_m,
            s.segment_count,
            s.pretension_n,
        )
    }
}

impl From<BlsModel> for BlsSpec {
    fn from(m: BlsModel) -> Self {
        BlsSpec {
            material: m.material,
            section: m.section,
            arc_length_m: m.arc_length,
            structure_height_m: m.structure_height,
            segment_length_m: m.segment_length,
            segment_count: m.segment_count,
            pretension_n: m.pretension,
        }
    }
}

/// Where a chamber stack's parameters came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StackSource {
    /// Hand-entered nominal values.
    #[default]
    Nominal,
    /// Produced by fitting measured withstand moments.
    Calibrated,
}

/// Pneumatic chamber stack of the air-tendon actuator.
///
/// `half_width` and `half_height` are the `a` and `b` of `M_p = 4·P·a·b²`
/// (pressure on a `2a × 2b` wall with lever arm `b`). `contact_first_moment`
/// is the effective contact area times its lever arm, in m³, so that
/// `M_c = P·S_contact` comes out as a moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StackSpec", into = "StackSpec")]
pub struct ChamberStack {
    chamber_count: u32,
    half_width: f64,
    half_height: f64,
    contact_first_moment: f64,
    restoring_moment: f64,
    tendon_critical_moment: f64,
    source: StackSource,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StackSpec {
    chamber_count: u32,
    half_width_m: f64,
    half_height_m: f64,
    contact_first_moment_m3: f64,
    #[serde(rename = "restoring_moment_N_m")]
    restoring_moment_n_m: f64,
    #[serde(rename = "tendon_critical_moment_N_m")]
    tendon_critical_moment_n_m: f64,
    #[serde(default)]
    source: StackSource,
}

/// Chamber count of the fabricated actuator.
pub const DEFAULT_CHAMBER_COUNT: u32 = 9;

impl ChamberStack {
    pub fn new(
        chamber_count: u32,
        half_width: f64,
        half_height: f64,
        contact_first_moment: f64,
        restoring_moment: f64,
        tendon_critical_moment: f64,
    ) -> Result<Self> {
        if chamber_count < 2 {
            return Err(MechError::domain(
                "chamber_count",
                format!("must be >= 2, got {chamber_count}"),
            ));
        }
        positive("half_width", half_width)?;
        positive("half_height", half_height)?;
        non_negative("contact_first_moment", contact_first_moment)?;
        non_negative("restoring_moment", restoring_moment)?;
        non_negative("tendon_critical_moment", tendon_critical_moment)?;
        Ok(Self {
            chamber_count,
            half_width,
            half_height,
            contact_first_moment,
            restoring_moment,
            tendon_critical_moment,
            source: StackSource::Nominal,
        })
    }

    pub fn chamber_count(&self) -> u32 {
        self.chamber_count
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn half_height(&self) -> f64 {
        self.half_height
    }

    /// Effective `S_contact` in m³.
    pub fn contact_first_moment(&self) -> f64 {
        self.contact_first_moment
    }

    /// Elastic restoring moment `M_w` in N·m.
    pub fn restoring_moment(&self) -> f64 {
        self.restoring_moment
    }

    /// Tendon critical moment `M_CR` in N·m.
    pub fn tendon_critical_moment(&self) -> f64 {
        self.tendon_critical_moment
    }

    pub fn source(&self) -> StackSource {
        self.source
    }

    pub fn is_calibrated(&self) -> bool {
        self.source == StackSource::Calibrated
    }

    pub fn with_contact_first_moment(&self, contact_first_moment: f64) -> Result<Self> {
        non_negative("contact_first_moment", contact_first_moment)?;
        Ok(Self {
            contact_first_moment,
            ..*self
        })
    }

    pub fn with_chamber_count(&self, chamber_count: u32) -> Result<Self> {
        Self::new(
            chamber_count,
            self.half_width,
            self.half_height,
            self.contact_first_moment,
            self.restoring_moment,
            self.tendon_critical_moment,
        )
        .map(|s| Self {
            source: self.source,
            ..s
        })
    }

    /// Rebuilds this stack from a lumped fit `M_f = c·P − 2(n−1)·M_w`.
    ///
    /// Chamber count, wall geometry and `M_CR` are kept; `M_w` is taken from
    /// the fit and `S_contact` is whatever remains of `c` after the wall
    /// pressure term `2(n−1)·4ab²`.
    pub fn from_lumped_fit(&self, lumped_coefficient: f64, restoring_moment: f64) -> Result<Self> {
        finite("lumped_coefficient", lumped_coefficient)?;
        let n1 = f64::from(self.chamber_count - 1);
        let wall = 2.0 * n1 * 4.0 * self.half_width * self.half_height.powi(2);
        let contact = (lumped_coefficient - wall) / n1;
        if contact < 0.0 {
            return Err(MechError::domain(
                "lumped_coefficient",
                format!(
                    "{lumped_coefficient} is below the wall-pressure term {wall} implied by the chamber geometry"
                ),
            ));
        }
        let mut stack = Self::new(
            self.chamber_count,
            self.half_width,
            self.half_height,
            contact,
            restoring_moment,
            self.tendon_critical_moment,
        )?;
        stack.source = StackSource::Calibrated;
        Ok(stack)
    }
}

impl TryFrom<StackSpec> for ChamberStack {
    type Error = MechError;
    fn try_from(s: StackSpec) -> Result<Self> {
        let mut stack = ChamberStack::new(
            s.chamber_count,
            s.half_width_m,
            s.half_height_m,
            s.contact_first_moment_m3,
            s.restoring_moment_n_m,
            s.tendon_critical_moment_n_m,
        )?;
        stack.source = s.source;
        Ok(stack)
    }
}

impl From<ChamberStack> for StackSpec {
    fn from(s: ChamberStack) -> Self {
        StackSpec {
            chamber_count: s.chamber_count,
            half_width_m: s.half_width,
            half_height_m: s.half_height,
            contact_first_moment_m3: s.contact_first_moment,
            restoring_moment_n_m: s.restoring_moment,
            tendon_critical_moment_n_m: s.tendon_critical_moment,
            source: s.source,
        }
    }
}

/// Constant-curvature state: bending angle and the matching radius under
/// a fixed arc length. A straight state has infinite radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcState {
    #[serde(rename = "angle_rad")]
    angle: f64,
    #[serde(rename = "radius_m")]
    radius: f64,
}

impl ArcState {
    /// Builds the state with `R = C / α` for a structure of arc length `C`.
    pub fn from_angle(arc_length: f64, angle: f64) -> Result<Self> {
        positive("arc_length", arc_length)?;
        non_negative("angle", angle)?;
        let radius = if angle == 0.0 {
            f64::INFINITY
        } else {
            arc_length / angle
        };
        Ok(Self { angle, radius })
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Radius in m; `f64::INFINITY` when straight.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn curvature(&self) -> f64 {
        if self.radius.is_infinite() {
            0.0
        } else {
            1.0 / self.radius
        }
    }

    pub fn is_straight(&self) -> bool {
        self.angle == 0.0
    }
}

/// External force on the tip of a bone-like structure and the chamber
/// pressure acting at the same time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LoadSpec", into = "LoadSpec")]
pub struct LoadCase {
    external_force: f64,
    pressure: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoadSpec {
    #[serde(rename = "external_force_N")]
    external_force_n: f64,
    #[serde(rename = "pressure_Pa")]
    pressure_pa: f64,
}

impl LoadCase {
    pub fn new(external_force: f64, pressure: f64) -> Result<Self> {
        non_negative("external_force", external_force)?;
        non_negative("pressure", pressure)?;
        Ok(Self {
            external_force,
            pressure,
        })
    }

    pub fn external_force(&self) -> f64 {
        self.external_force
    }

    pub fn pressure(&self) -> f64 {
        self.pressure
    }
}

impl TryFrom<LoadSpec> for LoadCase {
    type Error = MechError;
    fn try_from(s: LoadSpec) -> Result<Self> {
        LoadCase::new(s.external_force_n, s.pressure_pa)
    }
}

impl From<LoadCase> for LoadSpec {
    fn from(l: LoadCase) -> Self {
        LoadSpec {
            external_force_n: l.external_force,
            pressure_pa: l.pressure,
        }
    }
}
