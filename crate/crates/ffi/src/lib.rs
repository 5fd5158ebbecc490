//! C ABI for `timebin-qkd`.
//!
//! Every fallible function returns a [`TbqkdStatus`] and writes its result
//! through an out-pointer. On failure a description is available from
//! [`tbqkd_last_error`] on the same thread until the next failing call.
//! Attacks are opaque handles released with [`tbqkd_attack_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use timebin_qkd::channel::ChannelParams;
use timebin_qkd::decoy::{binary_entropy, FiniteKeyEpsilons};
use timebin_qkd::keyrate::{expected_key_rate, AnalysisOptions, KeyRateBreakdown, ProtocolParams};
use timebin_qkd::optimize::{optimize, ParamPoint, ParamSpace, Target};
use timebin_qkd::phase_error::{
    ex_eq12, ex_eq2, ex_eq7, ex_ideal, FormulaVariant, JointProbSet, SimpleProbSet, TimebinProbSet,
};
use timebin_qkd::quantum::EveAttack;
use timebin_qkd::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbqkdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    NoStatistics = 3,
    ForbiddenState = 4,
    Infeasible = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque collective attack.
pub struct TbqkdAttack(EveAttack);

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub enum TbqkdProtocol {
    /// Three-state protocol, one-decoy weak coherent source.
    Decoy = 0,
    /// Three-state protocol, ideal single-photon source.
    SinglePhoton = 1,
    /// Four-state BB84, ideal single-photon source.
    Bb84 = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TbqkdChannel {
    pub attenuation_db: f64,
    pub p_dc: f64,
    pub e_mis: f64,
    pub det_eff: f64,
}

/// Source parameters. `mu1`, `mu2`, `p_mu1` are ignored by the
/// single-photon protocols.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TbqkdSource {
    pub mu1: f64,
    pub mu2: f64,
    pub p_mu1: f64,
    pub p_z: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TbqkdFiniteKey {
    pub rounds: u64,
    pub eps_sec: f64,
    pub eps_cor: f64,
    /// Per-bound Hoeffding failure probability; 0 selects `eps_sec / 19`.
    pub eps_hoeffding: f64,
    pub ec_efficiency: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct TbqkdKeyRate {
    pub key_length: f64,
    pub rate: f64,
    pub qber_z: f64,
    pub n_z: f64,
    pub d0_z_lower: f64,
    pub d1_z_lower: f64,
    pub ex_upper: f64,
    pub gamma: f64,
    pub ez_upper: f64,
    pub lambda_ec: f64,
    /// Nonzero when the key length was forced to 0 for lack of statistics.
    pub aborted: bool,
}

impl From<&KeyRateBreakdown> for TbqkdKeyRate {
    fn from(b: &KeyRateBreakdown) -> Self {
        Self {
            key_length: b.key_length,
            rate: b.rate(),
            qber_z: b.qber_z,
            n_z: b.n_z,
            d0_z_lower: b.d0_z_lower,
            d1_z_lower: b.d1_z_lower,
            ex_upper: b.ex_upper,
            gamma: b.gamma,
            ez_upper: b.ez_upper,
            lambda_ec: b.lambda_ec,
            aborted: b.abort.is_some(),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn status(&self) -> TbqkdStatus {
        match self {
            Failure::Null(_) => TbqkdStatus::NullPointer,
            Failure::Lib(Error::NoStatistics(_)) => TbqkdStatus::NoStatistics,
            Failure::Lib(Error::InvalidParameter { .. } | Error::Config { .. }) => TbqkdStatus::InvalidParameter,
            Failure::Lib(Error::ForbiddenState) => TbqkdStatus::ForbiddenState,
            Failure::Lib(Error::InfeasibleCorrection(_)) => TbqkdStatus::Infeasible,
            Failure::Lib(Error::Io(_)) => TbqkdStatus::Io,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Null(name) => format!("`{name}` is a null pointer"),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

/// Runs `f`, mapping errors and panics to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TbqkdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TbqkdStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.message());
            e.status()
        }
        Err(_) => {
            set_error("internal panic".into());
            TbqkdStatus::Panic
        }
    }
}

/// Writes `v` through `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write<T>(out: *mut T, v: T, name: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    out.write(v);
    Ok(())
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn read<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn tbqkd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tbqkd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn tbqkd_binary_entropy(x: f64) -> f64 {
    binary_entropy(x)
}

fn new_attack(out: *mut *mut TbqkdAttack, make: impl FnOnce() -> Result<EveAttack, Error>) -> TbqkdStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let a = make()?;
        // SAFETY: checked non-null above; the caller guarantees writability.
        unsafe { out.write(Box::into_raw(Box::new(TbqkdAttack(a)))) };
        Ok(())
    })
}

/// Attack that leaves the qubit untouched, with an ancilla of dimension `dim`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tbqkd_attack_identity(dim: usize, out: *mut *mut TbqkdAttack) -> TbqkdStatus {
    new_attack(out, || EveAttack::identity(dim))
}

/// Z-basis intercept-resend attack.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tbqkd_attack_intercept_resend(out: *mut *mut TbqkdAttack) -> TbqkdStatus {
    new_attack(out, || Ok(EveAttack::intercept_resend()))
}

/// Attack applying a Z phase flip.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tbqkd_attack_phase_flip(dim: usize, out: *mut *mut TbqkdAttack) -> TbqkdStatus {
    new_attack(out, || EveAttack::phase_flip(dim))
}

/// Random isometry with ancilla dimension `dim` and roughly `loss_weight`
/// of the mass in the vacuum component.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tbqkd_attack_random(
    dim: usize,
    loss_weight: f64,
    seed: u64,
    out: *mut *mut TbqkdAttack,
) -> TbqkdStatus {
    new_attack(out, || EveAttack::sample(dim, loss_weight, seed))
}

/// Releases an attack. Null is ignored.
///
/// # Safety
/// `attack` must be null or a handle from a `tbqkd_attack_*` constructor
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tbqkd_attack_free(attack: *mut TbqkdAttack) {
    if !attack.is_null() {
        drop(Box::from_raw(attack));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub enum TbqkdEstimator {
    /// Ideal phase error from all four X-basis probabilities.
    Ideal = 0,
    /// Simplified receiver: Z basis plus one `|->` projection.
    Simplified = 1,
    /// Time-bin monitoring line, conditional probabilities.
    MonitoringLine = 2,
    /// Time-bin monitoring line, joint probabilities of the efficient encoding.
    Joint = 3,
}

/// Phase error of `attack` under `estimator`, clamped to `[0, 1]`. `p_z`
/// is only read by `Joint`.
///
/// # Safety
/// `attack` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tbqkd_phase_error(
    attack: *const TbqkdAttack,
    estimator: TbqkdEstimator,
    p_z: f64,
    out: *mut f64,
) -> TbqkdStatus {
    guard(|| {
        let a = &read(attack, "attack")?.0;
        let v = match estimator {
            TbqkdEstimator::Ideal => ex_ideal(a)?,
            TbqkdEstimator::Simplified => ex_eq2(&SimpleProbSet::from_attack(a))?.value(),
            TbqkdEstimator::MonitoringLine => ex_eq7(&TimebinProbSet::from_attack(a))?.value(),
            TbqkdEstimator::Joint => {
                let j = JointProbSet::from_conditional(&TimebinProbSet::from_attack(a), p_z)?;
                ex_eq12(&j, FormulaVariant::Corrected)?.value()
            }
        };
        write(out, v, "out")
    })
}

fn channel(c: &TbqkdChannel) -> Result<ChannelParams, Error> {
    ChannelParams::new(c.attenuation_db, c.p_dc, c.e_mis, c.det_eff)
}

fn params(f: &TbqkdFiniteKey) -> Result<ProtocolParams, Error> {
    let mut eps = FiniteKeyEpsilons::new(f.eps_sec, f.eps_cor)?;
    if f.eps_hoeffding != 0.0 {
        eps = eps.with_hoeffding(f.eps_hoeffding)?;
    }
    let mut p = ProtocolParams::new(f.rounds, eps);
    p.options = AnalysisOptions {
        ec_efficiency: f.ec_efficiency,
        ..Default::default()
    };
    Ok(p)
}

fn target(p: TbqkdProtocol) -> Target {
    match p {
        TbqkdProtocol::Decoy => Target::Decoy,
        TbqkdProtocol::SinglePhoton => Target::SinglePhoton,
        TbqkdProtocol::Bb84 => Target::Bb84,
    }
}

/// Key length on the expected counts of an honest channel.
///
/// # Safety
/// Input pointers must reference live values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tbqkd_key_rate(
    channel_params: *const TbqkdChannel,
    protocol: TbqkdProtocol,
    source: *const TbqkdSource,
    finite_key: *const TbqkdFiniteKey,
    out: *mut TbqkdKeyRate,
) -> TbqkdStatus {
    guard(|| {
        let ch = channel(read(channel_params, "channel")?)?;
        let s = read(source, "source")?;
        let p = params(read(finite_key, "finite_key")?)?;
        let point = ParamPoint {
            mu1: s.mu1,
            mu2: s.mu2,
            p_mu1: s.p_mu1,
            p_z: s.p_z,
        };
        let b = expected_key_rate(&ch, point.protocol(target(protocol))?, s.p_z, &p)?;
        write(out, TbqkdKeyRate::from(&b), "out")
    })
}

/// Maximizes the key rate over the default search box. The best source
/// parameters go to `out_source`, their key rate to `out`.
///
/// # Safety
/// Input pointers must reference live values; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tbqkd_optimize(
    channel_params: *const TbqkdChannel,
    protocol: TbqkdProtocol,
    finite_key: *const TbqkdFiniteKey,
    out_source: *mut TbqkdSource,
    out: *mut TbqkdKeyRate,
) -> TbqkdStatus {
    guard(|| {
        let ch = channel(read(channel_params, "channel")?)?;
        let p = params(read(finite_key, "finite_key")?)?;
        if out_source.is_null() {
            return Err(Failure::Null("out_source"));
        }
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let o = optimize(&ch, target(protocol), &p, &ParamSpace::default())?;
        let pt = o.point;
        write(
            out_source,
            TbqkdSource {
                mu1: pt.mu1,
                mu2: pt.mu2,
                p_mu1: pt.p_mu1,
                p_z: pt.p_z,
            },
            "out_source",
        )?;
        write(out, TbqkdKeyRate::from(&o.breakdown), "out")
    })
}
