use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use timebin_qkd_ffi::*;

fn profile_channel(att: f64) -> TbqkdChannel {
    TbqkdChannel {
        attenuation_db: att,
        p_dc: 1e-10,
        e_mis: 0.01,
        det_eff: 1.0,
    }
}

fn finite_key() -> TbqkdFiniteKey {
    TbqkdFiniteKey {
        rounds: 100_000_000,
        eps_sec: 1e-9,
        eps_cor: 1e-9,
        eps_hoeffding: 0.0,
        ec_efficiency: 1.16,
    }
}

fn last_error() -> String {
    let p = tbqkd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn attack_handles_and_estimators() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(tbqkd_attack_intercept_resend(&mut a), TbqkdStatus::Ok);
        for est in [
            TbqkdEstimator::Ideal,
            TbqkdEstimator::Simplified,
            TbqkdEstimator::MonitoringLine,
            TbqkdEstimator::Joint,
        ] {
            let mut ex = -1.0;
            assert_eq!(tbqkd_phase_error(a, est, 0.5, &mut ex), TbqkdStatus::Ok);
            assert!((ex - 0.5).abs() < 1e-12, "{est:?} {ex}");
        }
        tbqkd_attack_free(a);

        let mut r = ptr::null_mut();
        assert_eq!(tbqkd_attack_random(4, 0.3, 11, &mut r), TbqkdStatus::Ok);
        let (mut ideal, mut eq7) = (0.0, 0.0);
        assert_eq!(
            tbqkd_phase_error(r, TbqkdEstimator::Ideal, 0.0, &mut ideal),
            TbqkdStatus::Ok
        );
        assert_eq!(
            tbqkd_phase_error(r, TbqkdEstimator::MonitoringLine, 0.0, &mut eq7),
            TbqkdStatus::Ok
        );
        assert!((ideal - eq7).abs() < 1e-10);
        tbqkd_attack_free(r);
        tbqkd_attack_free(ptr::null_mut());
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(tbqkd_attack_random(0, 0.3, 1, &mut a), TbqkdStatus::InvalidParameter);
        assert!(a.is_null());
        assert!(last_error().contains("ancilla"), "{}", last_error());

        assert_eq!(tbqkd_attack_identity(1, ptr::null_mut()), TbqkdStatus::NullPointer);
        assert!(last_error().contains("null"));

        let mut id = ptr::null_mut();
        assert_eq!(tbqkd_attack_identity(1, &mut id), TbqkdStatus::Ok);
        let mut v = 0.0;
        assert_eq!(
            tbqkd_phase_error(id, TbqkdEstimator::Joint, 1.5, &mut v),
            TbqkdStatus::InvalidParameter
        );
        assert_eq!(
            tbqkd_phase_error(id, TbqkdEstimator::Ideal, 0.5, ptr::null_mut()),
            TbqkdStatus::NullPointer
        );
        tbqkd_attack_free(id);

        let mut out = TbqkdKeyRate::default();
        let bad = TbqkdChannel {
            e_mis: 0.9,
            ..profile_channel(0.0)
        };
        let src = TbqkdSource {
            p_z: 0.5,
            ..Default::default()
        };
        assert_eq!(
            tbqkd_key_rate(&bad, TbqkdProtocol::SinglePhoton, &src, &finite_key(), &mut out),
            TbqkdStatus::InvalidParameter
        );
    }
}

#[test]
fn key_rate_and_optimize() {
    unsafe {
        let src = TbqkdSource {
            mu1: 0.5,
            mu2: 0.1,
            p_mu1: 0.7,
            p_z: 0.8,
        };
        let mut fixed = TbqkdKeyRate::default();
        assert_eq!(
            tbqkd_key_rate(
                &profile_channel(10.0),
                TbqkdProtocol::Decoy,
                &src,
                &finite_key(),
                &mut fixed
            ),
            TbqkdStatus::Ok
        );
        assert!(fixed.key_length > 0.0 && !fixed.aborted);
        assert!((fixed.rate - fixed.key_length / 1e8).abs() < 1e-15);

        let mut best_src = TbqkdSource::default();
        let mut best = TbqkdKeyRate::default();
        assert_eq!(
            tbqkd_optimize(
                &profile_channel(10.0),
                TbqkdProtocol::Decoy,
                &finite_key(),
                &mut best_src,
                &mut best
            ),
            TbqkdStatus::Ok
        );
        assert!(best.rate >= fixed.rate);
        assert!(best_src.mu2 < best_src.mu1);

        let mut lost = TbqkdKeyRate::default();
        assert_eq!(
            tbqkd_key_rate(
                &profile_channel(200.0),
                TbqkdProtocol::Bb84,
                &src,
                &finite_key(),
                &mut lost
            ),
            TbqkdStatus::Ok
        );
        assert_eq!(lost.key_length, 0.0);
    }
}

#[test]
fn scalar_helpers() {
    assert_eq!(tbqkd_binary_entropy(0.5), 1.0);
    assert_eq!(tbqkd_binary_entropy(0.0), 0.0);
    let v = unsafe { CStr::from_ptr(tbqkd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/timebin_qkd.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "tbqkd_attack_random",
        "tbqkd_attack_free",
        "tbqkd_phase_error",
        "tbqkd_key_rate",
        "tbqkd_optimize",
        "tbqkd_last_error",
        "typedef struct TbqkdAttack TbqkdAttack",
        "TBQKD_STATUS_NULL_POINTER = 1",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // Syntax-check the header with the system C compiler when there is one.
    if let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c"])
        .arg(&header)
        .output()
    {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
