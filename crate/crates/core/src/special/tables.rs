//! Coefficient tables `(c, i, j, k)` for `c·aⁱ·bʲ·yᵏ`, sorted by `(k, i, j)`.

pub(super) const R4_TERMS: [(i64, u32, u32, u32); 23] = [
    (1, 0, 0, 0),
    (4, 0, 0, 1),
    (-8, 0, 2, 1),
    (-4, 1, 1, 1),
    (-8, 2, 0, 1),
    (16, 2, 2, 1),
    (4, 0, 0, 2),
    (-12, 0, 2, 2),
    (16, 0, 4, 2),
    (20, 1, 1, 2),
    (-16, 1, 3, 2),
    (-12, 2, 0, 2),
    (-16, 3, 1, 2),
    (16, 4, 0, 2),
    (-8, 0, 2, 3),
    (16, 1, 1, 3),
    (-16, 1, 3, 3),
    (-8, 2, 0, 3),
    (32, 2, 2, 3),
    (-16, 3, 1, 3),
    (4, 0, 2, 4),
    (-8, 1, 1, 4),
    (4, 2, 0, 4),
];

pub(super) const R10_TERMS: [(i64, u32, u32, u32); 179] = [
    (4, 2, 2, 0),
    (9, 0, 0, 1),
    (-27, 0, 2, 1),
    (-102, 1, 1, 1),
    (144, 1, 3, 1),
    (-27, 2, 0, 1),
    (207, 2, 2, 1),
    (-128, 2, 4, 1),
    (144, 3, 1, 1),
    (-160, 3, 3, 1),
    (-128, 4, 2, 1),
    (64, 0, 0, 2),
    (-93, 0, 2, 2),
    (228, 0, 4, 2),
    (-284, 1, 1, 2),
    (740, 1, 3, 2),
    (-992, 1, 5, 2),
    (-93, 2, 0, 2),
    (-818, 2, 2, 2),
    (-16, 2, 4, 2),
    (740, 3, 1, 2),
    (1208, 3, 3, 2),
    (228, 4, 0, 2),
    (-16, 4, 2, 2),
    (64, 4, 4, 2),
    (-992, 5, 1, 2),
    (164, 0, 0, 3),
    (-132, 0, 2, 3),
    (-804, 0, 4, 3),
    (432, 0, 6, 3),
    (-100, 1, 1, 3),
    (1218, 1, 3, 3),
    (2360, 1, 5, 3),
    (-1536, 1, 7, 3),
    (-132, 2, 0, 3),
    (-1108, 2, 2, 3),
    (-856, 2, 4, 3),
    (1856, 2, 6, 3),
    (1218, 3, 1, 3),
    (-3120, 3, 3, 3),
    (-448, 3, 5, 3),
    (-804, 4, 0, 3),
    (-856, 4, 2, 3),
    (-16, 4, 4, 3),
    (2360, 5, 1, 3),
    (-448, 5, 3, 3),
    (432, 6, 0, 3),
    (1856, 6, 2, 3),
    (-1536, 7, 1, 3),
    (168, 0, 0, 4),
    (-18, 0, 2, 4),
    (-1476, 0, 4, 4),
    (432, 0, 6, 4),
    (-108, 1, 1, 4),
    (-840, 1, 3, 4),
    (688, 1, 5, 4),
    (384, 1, 7, 4),
    (-18, 2, 0, 4),
    (4384, 2, 2, 4),
    (-8864, 2, 4, 4),
    (4384, 2, 6, 4),
    (-840, 3, 1, 4),
    (15744, 3, 3, 4),
    (-11744, 3, 5, 4),
    (-1476, 4, 0, 4),
    (-8864, 4, 2, 4),
    (13920, 4, 4, 4),
    (688, 5, 1, 4),
    (-11744, 5, 3, 4),
    (432, 6, 0, 4),
    (4384, 6, 2, 4),
    (384, 7, 1, 4),
    (32, 0, 0, 5),
    (180, 0, 2, 5),
    (2467, 0, 4, 5),
    (792, 0, 6, 5),
    (-720, 0, 8, 5),
    (-424, 1, 1, 5),
    (-4228, 1, 3, 5),
    (440, 1, 5, 5),
    (1824, 1, 7, 5),
    (180, 2, 0, 5),
    (3554, 2, 2, 5),
    (-15928, 2, 4, 5),
    (5104, 2, 6, 5),
    (-4228, 3, 1, 5),
    (29392, 3, 3, 5),
    (-25088, 3, 5, 5),
    (2467, 4, 0, 5),
    (-15928, 4, 2, 5),
    (37760, 4, 4, 5),
    (440, 5, 1, 5),
    (-25088, 5, 3, 5),
    (792, 6, 0, 5),
    (5104, 6, 2, 5),
    (1824, 7, 1, 5),
    (-720, 8, 0, 5),
    (-32, 0, 0, 6),
    (-336, 0, 2, 6),
    (258, 0, 4, 6),
    (-3840, 0, 6, 6),
    (480, 0, 8, 6),
    (736, 1, 1, 6),
    (1064, 1, 3, 6),
    (6680, 1, 5, 6),
    (-4320, 1, 7, 6),
    (-336, 2, 0, 6),
    (-2676, 2, 2, 6),
    (6976, 2, 4, 6),
    (10688, 2, 6, 6),
    (1064, 3, 1, 6),
    (-19632, 3, 3, 6),
    (-12256, 3, 5, 6),
    (258, 4, 0, 6),
    (6976, 4, 2, 6),
    (10816, 4, 4, 6),
    (6680, 5, 1, 6),
    (-12256, 5, 3, 6),
    (-3840, 6, 0, 6),
    (10688, 6, 2, 6),
    (-4320, 7, 1, 6),
    (480, 8, 0, 6),
    (-576, 0, 2, 7),
    (-1392, 0, 4, 7),
    (4368, 0, 6, 7),
    (1152, 1, 1, 7),
    (5312, 1, 3, 7),
    (-12848, 1, 5, 7),
    (576, 1, 7, 7),
    (-576, 2, 0, 7),
    (-7840, 2, 2, 7),
    (12912, 2, 4, 7),
    (-1104, 2, 6, 7),
    (5312, 3, 1, 7),
    (-8864, 3, 3, 7),
    (-768, 3, 5, 7),
    (-1392, 4, 0, 7),
    (12912, 4, 2, 7),
    (2592, 4, 4, 7),
    (-12848, 5, 1, 7),
    (-768, 5, 3, 7),
    (4368, 6, 0, 7),
    (-1104, 6, 2, 7),
    (576, 7, 1, 7),
    (192, 0, 2, 8),
    (168, 0, 4, 8),
    (-960, 0, 6, 8),
    (-384, 1, 1, 8),
    (-864, 1, 3, 8),
    (1568, 1, 5, 8),
    (192, 2, 0, 8),
    (1392, 2, 2, 8),
    (2368, 2, 4, 8),
    (-288, 2, 6, 8),
    (-864, 3, 1, 8),
    (-5952, 3, 3, 8),
    (1152, 3, 5, 8),
    (168, 4, 0, 8),
    (2368, 4, 2, 8),
    (-1728, 4, 4, 8),
    (1568, 5, 1, 8),
    (1152, 5, 3, 8),
    (-960, 6, 0, 8),
    (-288, 6, 2, 8),
    (160, 0, 4, 9),
    (-640, 1, 3, 9),
    (448, 1, 5, 9),
    (960, 2, 2, 9),
    (-1792, 2, 4, 9),
    (-640, 3, 1, 9),
    (2688, 3, 3, 9),
    (160, 4, 0, 9),
    (-1792, 4, 2, 9),
    (448, 5, 1, 9),
    (-32, 0, 4, 10),
    (128, 1, 3, 10),
    (-192, 2, 2, 10),
    (128, 3, 1, 10),
    (-32, 4, 0, 10),
];
