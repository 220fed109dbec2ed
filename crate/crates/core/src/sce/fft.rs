//! Two-dimensional FFT helpers on row-major square buffers.

use std::cell::RefCell;
use std::ops::Range;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    // reused across calls: fresh megabyte-sized buffers cost more than the transform
    static WORK: RefCell<(Vec<Complex64>, Vec<Complex64>)> = const { RefCell::new((Vec::new(), Vec::new())) };
}

fn plan(m: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(m, direction))
}


/// Unnormalized 2-D DFT in place.
///
/// `live_rows` names the rows that may be nonzero on input; rows outside it
/// are assumed zero and skipped in the first pass.
pub(crate) fn fft2(
    buf: &mut [Complex64],
    m: usize,
    direction: FftDirection,
    live_rows: Option<Range<usize>>,
) {
    debug_assert_eq!(buf.len(), m * m);
    let fft = plan(m, direction);
    WORK.with(|w| {
        let (scratch, turned) = &mut *w.borrow_mut();
        scratch.resize(fft.get_inplace_scratch_len(), Complex64::default());
        turned.resize(m * m, Complex64::default());
        let rows = live_rows.unwrap_or(0..m);
        if !rows.is_empty() {
            let (s, e) = (rows.start * m, rows.end * m);
            fft.process_with_scratch(&mut buf[s..e], scratch);
        }
        transpose::transpose(buf, turned, m, m);
        fft.process_with_scratch(turned, scratch);
        transpose::transpose(turned, buf, m, m);
    });
}
