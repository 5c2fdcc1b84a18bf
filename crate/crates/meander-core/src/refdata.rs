//! Frozen extended-precision reference values for special-function tests.

// (nu, z, J_nu(z), e^{-z} I_nu(z)) reference values, 40-digit precision, rounded to f64
pub const BESSEL_REF: &[(f64, f64, f64, f64)] = &[
    (-0.9, 0.1, 1.519160245348575, 1.4450829631448097),
    (-0.9, 1.8, -0.5174112373657486, 0.2386354822078265),
    (-0.9, 3.5, -0.20913194767840448, 0.1936332051494761),
    (-0.9, 6.9, 0.08577910448624035, 0.14533495829707252),
    (-0.9, 11.3, 0.19430167688858505, 0.11563510549423482),
    (-0.9, 17.2, 0.1031878028191755, 0.0945929185697194),
    (-0.9, 23.8, 0.12589049360165933, 0.08079799076953668),
    (-0.9, 29.9, 0.09318232141563455, 0.07226655117856569),
    (-0.9, 31.5, 0.10677378468698463, 0.07044193440683162),
    (-0.9, 38.0, 0.07670381466914038, 0.06423549198338825),
    (-0.9, 44.7, 0.025872068788470155, 0.05929319121644684),
    (-0.9, 50.0, 0.10527149444229962, 0.05610069489764594),
    (-0.5, 0.1, 2.5105273689585093, 2.2944493559446366),
    (-0.5, 1.8, -0.13511891212745408, 0.3054788380523418),
    (-0.5, 3.5, -0.39938682536304904, 0.2134380716330149),
    (-0.5, 6.9, 0.2477760595784832, 0.15187488480467864),
    (-0.5, 11.3, 0.07114645812668985, 0.11867817087625339),
    (-0.5, 17.2, -0.015136665876930343, 0.09619352559194351),
    (-0.5, 23.8, 0.03856731144423601, 0.08177519478945156),
    (-0.5, 29.9, 0.008002392141315434, 0.07295826064069486),
    (-0.5, 31.5, 0.14166028163272915, 0.07108120620764102),
    (-0.5, 38.0, 0.12361897086212026, 0.06471698367586756),
    (-0.5, 44.7, 0.08990107895663225, 0.05967003660360083),
    (-0.5, 50.0, 0.10888475635053954, 0.05641895835477563),
    (0.0, 0.1, 0.99750156206604, 0.9071009257823011),
    (0.0, 1.8, 0.33998641104255833, 0.3288719496998188),
    (0.0, 3.5, -0.3801277399872634, 0.22280243801077917),
    (0.0, 6.9, 0.29810203540482005, 0.1548956090669017),
    (0.0, 11.3, -0.11206845610980694, 0.12006336518736223),
    (0.0, 17.2, -0.14719114676602996, 0.09691699379921247),
    (0.0, 23.8, -0.085837144306172, 0.08221531274452208),
    (0.0, 29.9, -0.09781115006606245, 0.07326921904600191),
    (0.0, 31.5, 0.10823892671147262, 0.07136848664864867),
    (0.0, 38.0, 0.11433273906115012, 0.06493310980894874),
    (0.0, 44.7, 0.11903997603132775, 0.059839049591078455),
    (0.0, 50.0, 0.055812327669251816, 0.05656162664745419),
    (0.5, 0.1, 0.25189294032600096, 0.2286831660755234),
    (0.5, 1.8, 0.5791550145693434, 0.2892292006652486),
    (0.5, 3.5, -0.14960456964952656, 0.21304916561283124),
    (0.5, 6.9, 0.17570076671857857, 0.15187457630716664),
    (0.5, 11.3, -0.2264425190835645, 0.11867817083991669),
    (0.5, 17.2, -0.19179066403076467, 0.09619352559194329),
    (0.5, 23.8, -0.15893801439358138, 0.08177519478945156),
    (0.5, 29.9, -0.14569692139121837, 0.07295826064069486),
    (0.5, 31.5, 0.011938011202398941, 0.07108120620764102),
    (0.5, 38.0, 0.038360160940750725, 0.06471698367586756),
    (0.5, 44.7, 0.07848470599762496, 0.05967003660360083),
    (0.5, 50.0, -0.029605831888924614, 0.05641895835477563),
    (1.0, 0.1, 0.049937526036242, 0.045298446808809324),
    (1.0, 1.8, 0.5815169517311651, 0.21772627878568723),
    (1.0, 3.5, 0.1373775273623272, 0.18739997660305),
    (1.0, 6.9, -0.03490209610461817, 0.14318517444810078),
    (1.0, 11.3, -0.21425502620750228, 0.1146211032893204),
    (1.0, 17.2, -0.12814970568721748, 0.09405606134973307),
    (1.0, 23.8, -0.1410266382879595, 0.0804691400267866),
    (1.0, 29.9, -0.10991681070937226, 0.07203337491186879),
    (1.0, 31.5, -0.09044569145442247, 0.0702263621902957),
    (1.0, 38.0, -0.059161889887760125, 0.06407295148494815),
    (1.0, 44.7, -0.007074322446221636, 0.05916587865632992),
    (1.0, 50.0, -0.09751182812517514, 0.0559931238928954),
    (2.3, 0.1, 0.00037897495018145746, 0.0003434306709274743),
    (2.3, 1.8, 0.2271018710695032, 0.061385801189957685),
    (2.3, 3.5, 0.46694776765903073, 0.09500149504486172),
    (2.3, 6.9, -0.30029220565460113, 0.10268224295883323),
    (2.3, 11.3, 0.15975323770842895, 0.09401938623725814),
    (2.3, 17.2, 0.17929391382579712, 0.08272890533204054),
    (2.3, 23.8, 0.129684362557396, 0.07339506767186305),
    (2.3, 29.9, 0.1313650224342371, 0.0669664275329712),
    (2.3, 31.5, -0.06550707851969384, 0.06553262482773922),
    (2.3, 38.0, -0.08159514278275003, 0.060511430998881184),
    (2.3, 44.7, -0.10577929548040929, 0.056363491727336),
    (2.3, 50.0, -0.011166785897573616, 0.05361880507964387),
    (4.0, 0.1, 2.6028648545684036e-07, 2.357525862005461e-07),
    (4.0, 1.8, 0.023196516869994313, 0.005302282209107755),
    (4.0, 3.5, 0.204405293034632, 0.021169976409849755),
    (4.0, 6.9, 0.1831965463261863, 0.04604457376551714),
    (4.0, 11.3, 0.053552872654829234, 0.05766918337730836),
    (4.0, 17.2, -0.07685461370996215, 0.06014512987879655),
    (4.0, 23.8, -0.0352984466132156, 0.058363806039828436),
    (4.0, 29.9, -0.0659735714679149, 0.055833663644440694),
    (4.0, 31.5, 0.12845233865343617, 0.055151594542914205),
    (4.0, 38.0, 0.12483585400584, 0.052467239400003605),
    (4.0, 44.7, 0.11887242686895533, 0.0499370357444813),
    (4.0, 50.0, 0.07084097728165495, 0.048124217080831616),
];

// (j, alpha, x, L_j^alpha(x)) reference values
pub const LAGUERRE_REF: &[(u32, f64, f64, f64)] = &[
    (3, -0.9, 0.05, -0.016645833333333346),
    (3, -0.9, 1.0, -0.23316666666666666),
    (3, -0.9, 7.7, -22.689333333333337),
    (3, -0.9, 23.0, -1498.9098333333334),
    (3, -0.9, 50.0, -18266.044833333333),
    (10, -0.9, 0.05, -0.04005070950568456),
    (10, -0.9, 1.0, 0.14243933107602652),
    (10, -0.9, 7.7, 3.119825328628082),
    (10, -0.9, 23.0, -23173.881026491337),
    (10, -0.9, 50.0, 2674280946.0531106),
    (25, -0.9, 0.05, -0.03371012850875658),
    (25, -0.9, 1.0, -0.03322308537234787),
    (25, -0.9, 7.7, -4.167311446268358),
    (25, -0.9, 23.0, -10808.05089784434),
    (25, -0.9, 50.0, -6083285374.649296),
    (40, -0.9, 0.05, -0.022348748564225293),
    (40, -0.9, 1.0, 0.052587187969379806),
    (40, -0.9, 7.7, -1.8544082752308384),
    (40, -0.9, 23.0, -8085.372605513283),
    (40, -0.9, 50.0, -6770582514.070158),
    (60, -0.9, 0.05, -0.009401791385596622),
    (60, -0.9, 1.0, -0.04826685509380348),
    (60, -0.9, 7.7, 1.9234154753043968),
    (60, -0.9, 23.0, -433.6320264882448),
    (60, -0.9, 50.0, 4640402506.07281),
    (3, -0.5, 0.05, 0.22185416666666666),
    (3, -0.5, 1.0, -0.4791666666666667),
    (3, -0.5, 7.7, -16.101333333333336),
    (3, -0.5, 23.0, -1409.3958333333333),
    (3, -0.5, 50.0, -17801.770833333332),
    (10, -0.5, 0.05, 0.025054754479801544),
    (10, -0.5, 1.0, 0.2909837992565552),
    (10, -0.5, 7.7, -0.6995643983172762),
    (10, -0.5, 23.0, -15855.098008560908),
    (10, -0.5, 50.0, 2372704383.187243),
    (25, -0.5, 0.05, -0.07206171440198123),
    (25, -0.5, 1.0, -0.1522372248778263),
    (25, -0.5, 7.7, -3.956764225537471),
    (25, -0.5, 23.0, -8046.661014774597),
    (25, -0.5, 50.0, -2494364346.7680836),
    (40, -0.5, 0.05, -0.08699243385044395),
    (40, -0.5, 1.0, 0.1459714217218867),
    (40, -0.5, 7.7, -3.9449575181531285),
    (40, -0.5, 23.0, -8663.532740727618),
    (40, -0.5, 50.0, -7026512394.422949),
    (60, -0.5, 0.05, -0.07051680531210543),
    (60, -0.5, 1.0, -0.11770078602748718),
    (60, -0.5, 7.7, 1.454343383282193),
    (60, -0.5, 23.0, -4016.6746105531392),
    (60, -0.5, 50.0, 3160228915.112771),
    (3, 0.0, 0.05, 0.8537291666666667),
    (3, 0.0, 1.0, -0.6666666666666666),
    (3, 0.0, 7.7, -9.253833333333334),
    (3, 0.0, 23.0, -1302.3333333333333),
    (3, 0.0, 50.0, -17232.333333333332),
    (10, 0.0, 0.05, 0.553804035788734),
    (10, 0.0, 1.0, 0.41894593253968254),
    (10, 0.0, 7.7, -5.622509243651657),
    (10, 0.0, 23.0, -7766.015112709436),
    (10, 0.0, 50.0, 2037190065.3738978),
    (25, 0.0, 0.05, 0.08024301463130439),
    (25, 0.0, 1.0, -0.4106910370779207),
    (25, 0.0, 7.7, -1.2632229767579517),
    (25, 0.0, 23.0, -2502.425409991152),
    (25, 0.0, 50.0, 1079530876.66282),
    (40, 0.0, 0.05, -0.20866693536935257),
    (40, 0.0, 1.0, 0.29464033076018875),
    (40, 0.0, 7.7, -6.083084516150073),
    (40, 0.0, 23.0, -6406.313507488708),
    (40, 0.0, 50.0, -5890459147.752973),
    (60, 0.0, 0.05, -0.3866220822823575),
    (60, 0.0, 1.0, -0.1926167535552849),
    (60, 0.0, 7.7, -1.492646240223187),
    (60, 0.0, 23.0, -8739.502682845834),
    (60, 0.0, 50.0, 324591694.3422035),
    (3, 1.3, 0.05, 5.090104166666666),
    (3, 1.3, 1.0, 0.3278333333333334),
    (3, 1.3, 7.7, 2.1926666666666663),
    (3, 1.3, 23.0, -1048.2288333333333),
    (3, 1.3, 50.0, -15807.643833333334),
    (10, 1.3, 0.05, 15.69675667169859),
    (10, 1.3, 1.0, -1.7397650504730988),
    (10, 1.3, 7.7, -10.129017857474391),
    (10, 1.3, 23.0, 4953.712931812112),
    (10, 1.3, 50.0, 1348200342.4057252),
    (25, 1.3, 0.05, 32.63537818900498),
    (25, 1.3, 1.0, 1.345188149159827),
    (25, 1.3, 7.7, 15.820799942877732),
    (25, 1.3, 23.0, 12024.16700186949),
    (25, 1.3, 50.0, 4798276549.790043),
    (40, 1.3, 0.05, 37.93406165571177),
    (40, 1.3, 1.0, -3.3602230989653457),
    (40, 1.3, 7.7, 8.61074882633344),
    (40, 1.3, 23.0, 11642.808948925936),
    (40, 1.3, 50.0, 1048950534.5257696),
    (60, 1.3, 0.05, 29.478337015332873),
    (60, 1.3, 1.0, 4.643177246442679),
    (60, 1.3, 7.7, -19.552124447743022),
    (60, 1.3, 23.0, -5351.620911937381),
    (60, 1.3, 50.0, -6457832611.578966),
    (3, 4.0, 0.05, 33.958729166666664),
    (3, 4.0, 1.0, 17.333333333333332),
    (3, 4.0, 7.7, 4.726166666666667),
    (3, 4.0, 23.0, -624.3333333333334),
    (3, 4.0, 50.0, -13098.333333333334),
    (10, 4.0, 0.05, 904.5830268393751),
    (10, 4.0, 1.0, 38.26194086199295),
    (10, 4.0, 7.7, 23.07243051731393),
    (10, 4.0, 23.0, 2785.3366344246033),
    (10, 4.0, 50.0, 521415563.6984127),
    (25, 4.0, 0.05, 18375.60084471759),
    (25, 4.0, 1.0, -168.43269729868132),
    (25, 4.0, 7.7, -90.51520807719676),
    (25, 4.0, 23.0, -12680.860555657053),
    (25, 4.0, 50.0, -392695117.4496386),
    (40, 4.0, 0.05, 89520.4306681345),
    (40, 4.0, 1.0, 648.5776822729166),
    (40, 4.0, 7.7, -137.54417666241392),
    (40, 4.0, 23.0, -26244.879977391687),
    (40, 4.0, 50.0, 1599304977.6014583),
    (60, 4.0, 0.05, 336010.45798585005),
    (60, 4.0, 1.0, -1289.7325414456768),
    (60, 4.0, 7.7, 221.42231949992123),
    (60, 4.0, 23.0, 9277.402157039556),
    (60, 4.0, 50.0, 8197132852.486735),
];
