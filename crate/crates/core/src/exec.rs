//! Execution modes for grid scans.
//!
//! Grid work parallelizes over independent rows or lines. Results are always
//! produced in index order and reduced sequentially afterwards, so both
//! modes give bit-identical results regardless of thread count.
//!
//! With the `parallel` feature disabled, [`Mode::Parallel`] degrades to the
//! sequential path; the benches compare the two modes in a single build.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

/// The mode the crate was built to prefer.
pub fn default_mode() -> Mode {
    #[cfg(feature = "parallel")]
    {
        Mode::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    {
        Mode::Sequential
    }
}

/// Map `f` over `0..n`, preserving index order.
pub fn map_indexed<T, F>(n: usize, mode: Mode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        Mode::Sequential => (0..n).map(f).collect(),
        Mode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}

/// Fill a buffer of `n_blocks` equal contiguous blocks, one call per block.
/// Blocks are disjoint `chunks_mut`, so this adds no transient allocation
/// beyond the buffer itself.
pub fn fill_blocks<T, F>(data: &mut [T], block_len: usize, mode: Mode, fill: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    assert_eq!(data.len() % block_len, 0);
    match mode {
        Mode::Sequential => {
            for (i, chunk) in data.chunks_mut(block_len).enumerate() {
                fill(i, chunk);
            }
        }
        Mode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                data.par_chunks_mut(block_len)
                    .enumerate()
                    .for_each(|(i, chunk)| fill(i, chunk));
            }
            #[cfg(not(feature = "parallel"))]
            {
                for (i, chunk) in data.chunks_mut(block_len).enumerate() {
                    fill(i, chunk);
                }
            }
        }
    }
}

/// In-place transform of disjoint strided lines of a flat buffer.
///
/// `line(i)` gives `(base, stride, len)` of line `i`; `apply` receives the
/// gathered line in a scratch vector and mutates it; the result is scattered
/// back. Lines must be pairwise disjoint index sets — that is what makes the
/// shared-pointer writes sound — which holds by construction for the lines
/// of a rectangular array along one axis.
pub(crate) fn for_each_line_in_place<T, L, F>(
    data: &mut [T],
    n_lines: usize,
    mode: Mode,
    line: L,
    apply: F,
) where
    T: Copy + Send + Sync,
    L: Fn(usize) -> (usize, usize, usize) + Sync + Send,
    F: Fn(usize, &mut Vec<T>) + Sync + Send,
{
    struct Shared<T>(*mut T, usize);
    unsafe impl<T: Send> Send for Shared<T> {}
    unsafe impl<T: Send> Sync for Shared<T> {}
    impl<T: Copy> Shared<T> {
        /// Callers guarantee disjoint index sets across concurrent users.
        unsafe fn get(&self, i: usize) -> T {
            debug_assert!(i < self.1);
            *self.0.add(i)
        }
        unsafe fn set(&self, i: usize, v: T) {
            debug_assert!(i < self.1);
            *self.0.add(i) = v;
        }
    }

    let shared = &Shared(data.as_mut_ptr(), data.len());
    let work = move |i: usize| {
        let (base, stride, len) = line(i);
        let mut scratch: Vec<T> = Vec::with_capacity(len);
        // SAFETY: lines are disjoint across `i` and indices are in bounds,
        // so concurrent access never aliases.
        unsafe {
            for k in 0..len {
                scratch.push(shared.get(base + k * stride));
            }
        }
        apply(i, &mut scratch);
        assert_eq!(scratch.len(), len, "apply must preserve line length");
        unsafe {
            for (k, v) in scratch.iter().enumerate() {
                shared.set(base + k * stride, *v);
            }
        }
    };

    match mode {
        Mode::Sequential => (0..n_lines).for_each(work),
        Mode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..n_lines).into_par_iter().for_each(&work);
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n_lines).for_each(work);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_indexed_order_is_stable() {
        let seq = map_indexed(100, Mode::Sequential, |i| i * i);
        let par = map_indexed(100, Mode::Parallel, |i| i * i);
        assert_eq!(seq, par);
    }

    #[test]
    fn line_transform_on_columns() {
        // 3x4 row-major array; negate each column (stride = 4)
        let mut a: Vec<i64> = (0..12).collect();
        let mut b = a.clone();
        for v in b.iter_mut() {
            *v = -*v;
        }
        for_each_line_in_place(
            &mut a,
            4,
            Mode::Parallel,
            |col| (col, 4, 3),
            |_, line| {
                for v in line.iter_mut() {
                    *v = -*v;
                }
            },
        );
        assert_eq!(a, b);
    }
}
