int f21(int a)
{
    for (int i0 = 0; i0 < a; i0++) a += i0;
    a = a + 0;
    a = a + 1;
    a = a + 2;
    a = a + 3;
    a = a + 4;
    a = a + 5;
    a = a + 6;
    a = a + 7;
    a = a + 8;
    a = a + 9;
    a = a + 10;
    a = a + 11;
    a = a + 12;
    a = a + 13;
    a = a + 14;
    a = a + 15;
    a = a + 16;
    a = a + 17;
    a = a + 18;
    a = a + 19;
    a = a + 20;
    a = a + 21;
    a = a + 22;
    a = a + 23;
    a = a + 24;
    a = a + 25;
    a = a + 26;
    a = a + 27;
    a = a + 28;
    a = a + 29;
    a = a + 30;
    a = a + 31;
    a = a + 32;
    a = a + 33;
    a = a + 34;
    a = a + 35;
    a = a + 36;
    a = a + 37;
    a = a + 38;
    a = a + 39;
    a = a + 40;
    a = a + 41;
    a = a + 42;
    a = a + 43;
    a = a + 44;
    a = a + 45;
    a = a + 46;
    a = a + 47;
    a = a + 48;
    a = a + 49;
    a = a + 50;
    a = a + 51;
    a = a + 52;
    a = a + 53;
    a = a + 54;
    a = a + 55;
    a = a + 56;
    a = a + 57;
    a = a + 58;
    a = a + 59;
    a = a + 60;
    a = a + 61;
    a = a + 62;
    a = a + 63;
    a = a + 64;
    a = a + 65;
    a = a + 66;
    a = a + 67;
    a = a + 68;
    a = a + 69;
    a = a + 70;
    a = a + 71;
    a = a + 72;
    a = a + 73;
    a = a + 74;
    a = a + 75;
    a = a + 76;
    a = a + 77;
    a = a + 78;
    a = a + 79;
    a = a + 80;
    a = a + 81;
    a = a + 82;
    a = a + 83;
    a = a + 84;
    a = a + 85;
    a = a + 86;
    a = a + 87;
    a = a + 88;
    a = a + 89;
    a = a + 90;
    a = a + 91;
    a = a + 92;
    a = a + 93;
    a = a + 94;
    a = a + 95;
    a = a + 96;
    a = a + 97;
    a = a + 98;
    a = a + 99;
    a = a + 100;
    a = a + 101;
    a = a + 102;
    a = a + 103;
    a = a + 104;
    a = a + 105;
    a = a + 106;
    a = a + 107;
    a = a + 108;
    a = a + 109;
    a = a + 110;
    a = a + 111;
    a = a + 112;
    a = a + 113;
    a = a + 114;
    a = a + 115;
    a = a + 116;
    a = a + 117;
    a = a + 118;
    a = a + 119;
    a = a + 120;
    a = a + 121;
    a = a + 122;
    a = a + 123;
    a = a + 124;
    a = a + 125;
    a = a + 126;
    a = a + 127;
    a = a + 128;
    a = a + 129;
    a = a + 130;
    a = a + 131;
    a = a + 132;
    a = a + 133;
    a = a + 134;
    a = a + 135;
    a = a + 136;
    a = a + 137;
    a = a + 138;
    a = a + 139;
    a = a + 140;
    a = a + 141;
    a = a + 142;
    a = a + 143;
    a = a + 144;
    a = a + 145;
    a = a + 146;
    a = a + 147;
    a = a + 148;
    a = a + 149;
    a = a + 150;
    a = a + 151;
    a = a + 152;
    a = a + 153;
    a = a + 154;
    a = a + 155;
    a = a + 156;
    a = a + 157;
    a = a + 158;
    a = a + 159;
    a = a + 160;
    a = a + 161;
    a = a + 162;
    a = a + 163;
    a = a + 164;
    a = a + 165;
    a = a + 166;
    a = a + 167;
    a = a + 168;
    a = a + 169;
    a = a + 170;
    a = a + 171;
    a = a + 172;
    a = a + 173;
    a = a + 174;
    a = a + 175;
    a = a + 176;
    a = a + 177;
    a = a + 178;
    a = a + 179;
    a = a + 180;
    a = a + 181;
    a = a + 182;
    a = a + 183;
    a = a + 184;
    a = a + 185;
    a = a + 186;
    a = a + 187;
    a = a + 188;
    a = a + 189;
    a = a + 190;
    a = a + 191;
    a = a + 192;
    a = a + 193;
    a = a + 194;
    a = a + 195;
    a = a + 196;
    a = a + 197;
    a = a + 198;
    a = a + 199;
    a = a + 200;
    a = a + 201;
    a = a + 202;
    a = a + 203;
    a = a + 204;
    a = a + 205;
    a = a + 206;
    a = a + 207;
    a = a + 208;
    a = a + 209;
    a = a + 210;
    a = a + 211;
    a = a + 212;
    a = a + 213;
    a = a + 214;
    a = a + 215;
    a = a + 216;
    a = a + 217;
    a = a + 218;
    a = a + 219;
    a = a + 220;
    a = a + 221;
    a = a + 222;
    a = a + 223;
    a = a + 224;
    a = a + 225;
    a = a + 226;
    a = a + 227;
    a = a + 228;
    a = a + 229;
    a = a + 230;
    a = a + 231;
    a = a + 232;
    a = a + 233;
    a = a + 234;
    a = a + 235;
    a = a + 236;
    a = a + 237;
    a = a + 238;
    a = a + 239;
    a = a + 240;
    a = a + 241;
    a = a + 242;
    a = a + 243;
    a = a + 244;
    a = a + 245;
    a = a + 246;
    a = a + 247;
    a = a + 248;
    a = a + 249;
    a = a + 250;
    a = a + 251;
    a = a + 252;
    a = a + 253;
    a = a + 254;
    a = a + 255;
    a = a + 256;
    a = a + 257;
    a = a + 258;
    a = a + 259;
    a = a + 260;
    a = a + 261;
    a = a + 262;
    a = a + 263;
    a = a + 264;
    a = a + 265;
    a = a + 266;
    a = a + 267;
    a = a + 268;
    a = a + 269;
    a = a + 270;
    a = a + 271;
    a = a + 272;
    a = a + 273;
    a = a + 274;
    a = a + 275;
    a = a + 276;
    a = a + 277;
    a = a + 278;
    a = a + 279;
    a = a + 280;
    a = a + 281;
    a = a + 282;
    a = a + 283;
    a = a + 284;
    a = a + 285;
    a = a + 286;
    a = a + 287;
    a = a + 288;
    a = a + 289;
    a = a + 290;
    a = a + 291;
    a = a + 292;
    a = a + 293;
    a = a + 294;
    a = a + 295;
    a = a + 296;
    a = a + 297;
    a = a + 298;
    a = a + 299;
    a = a + 300;
    a = a + 301;
    a = a + 302;
    a = a + 303;
    a = a + 304;
    a = a + 305;
    a = a + 306;
    a = a + 307;
    a = a + 308;
    a = a + 309;
    a = a + 310;
    a = a + 311;
    a = a + 312;
    a = a + 313;
    a = a + 314;
    a = a + 315;
    a = a + 316;
    a = a + 317;
    a = a + 318;
    a = a + 319;
    a = a + 320;
    a = a + 321;
    a = a + 322;
    a = a + 323;
    a = a + 324;
    a = a + 325;
    a = a + 326;
    a = a + 327;
    a = a + 328;
    a = a + 329;
    a = a + 330;
    a = a + 331;
    a = a + 332;
    a = a + 333;
    a = a + 334;
    a = a + 335;
    a = a + 336;
    a = a + 337;
    a = a + 338;
    a = a + 339;
    a = a + 340;
    a = a + 341;
    a = a + 342;
    a = a + 343;
    a = a + 344;
    a = a + 345;
    a = a + 346;
    a = a + 347;
    a = a + 348;
    a = a + 349;
    a = a + 350;
    a = a + 351;
    a = a + 352;
    a = a + 353;
    a = a + 354;
    a = a + 355;
    a = a + 356;
    a = a + 357;
    a = a + 358;
    a = a + 359;
    a = a + 360;
    a = a + 361;
    a = a + 362;
    a = a + 363;
    a = a + 364;
    a = a + 365;
    a = a + 366;
    a = a + 367;
    a = a + 368;
    a = a + 369;
    a = a + 370;
    a = a + 371;
    a = a + 372;
    a = a + 373;
    a = a + 374;
    a = a + 375;
    a = a + 376;
    a = a + 377;
    a = a + 378;
    a = a + 379;
    a = a + 380;
    a = a + 381;
    a = a + 382;
    a = a + 383;
    a = a + 384;
    a = a + 385;
    a = a + 386;
    a = a + 387;
    a = a + 388;
    a = a + 389;
    a = a + 390;
    a = a + 391;
    a = a + 392;
    a = a + 393;
    a = a + 394;
    a = a + 395;
    a = a + 396;
    a = a + 397;
    a = a + 398;
    a = a + 399;
    a = a + 400;
    a = a + 401;
    a = a + 402;
    a = a + 403;
    a = a + 404;
    a = a + 405;
    a = a + 406;
    a = a + 407;
    a = a + 408;
    a = a + 409;
    a = a + 410;
    a = a + 411;
    a = a + 412;
    a = a + 413;
    a = a + 414;
    a = a + 415;
    a = a + 416;
    a = a + 417;
    a = a + 418;
    a = a + 419;
    a = a + 420;
    a = a + 421;
    a = a + 422;
    a = a + 423;
    a = a + 424;
    a = a + 425;
    a = a + 426;
    a = a + 427;
    a = a + 428;
    a = a + 429;
    a = a + 430;
    a = a + 431;
    a = a + 432;
    a = a + 433;
    a = a + 434;
    a = a + 435;
    a = a + 436;
    a = a + 437;
    a = a + 438;
    a = a + 439;
    a = a + 440;
    a = a + 441;
    a = a + 442;
    a = a + 443;
    a = a + 444;
    a = a + 445;
    a = a + 446;
    a = a + 447;
    a = a + 448;
    a = a + 449;
    a = a + 450;
    a = a + 451;
    a = a + 452;
    a = a + 453;
    a = a + 454;
    a = a + 455;
    a = a + 456;
    a = a + 457;
    a = a + 458;
    a = a + 459;
    a = a + 460;
    a = a + 461;
    a = a + 462;
    a = a + 463;
    a = a + 464;
    a = a + 465;
    a = a + 466;
    a = a + 467;
    a = a + 468;
    a = a + 469;
    a = a + 470;
    a = a + 471;
    a = a + 472;
    a = a + 473;
    a = a + 474;
    a = a + 475;
    a = a + 476;
    a = a + 477;
    a = a + 478;
    a = a + 479;
    a = a + 480;
    a = a + 481;
    a = a + 482;
    a = a + 483;
    a = a + 484;
    a = a + 485;
    a = a + 486;
    a = a + 487;
    a = a + 488;
    a = a + 489;
    a = a + 490;
    a = a + 491;
    a = a + 492;
    a = a + 493;
    a = a + 494;
    a = a + 495;
    a = a + 496;
    a = a + 497;
    a = a + 498;
    a = a + 499;
    a = a + 500;
    a = a + 501;
    a = a + 502;
    a = a + 503;
    a = a + 504;
    a = a + 505;
    a = a + 506;
    a = a + 507;
    a = a + 508;
    a = a + 509;
    a = a + 510;
    a = a + 511;
    a = a + 512;
    a = a + 513;
    a = a + 514;
    a = a + 515;
    a = a + 516;
    a = a + 517;
    a = a + 518;
    a = a + 519;
    a = a + 520;
    a = a + 521;
    a = a + 522;
    a = a + 523;
    a = a + 524;
    a = a + 525;
    a = a + 526;
    a = a + 527;
    a = a + 528;
    a = a + 529;
    a = a + 530;
    a = a + 531;
    a = a + 532;
    a = a + 533;
    a = a + 534;
    a = a + 535;
    a = a + 536;
    a = a + 537;
    a = a + 538;
    a = a + 539;
    a = a + 540;
    a = a + 541;
    a = a + 542;
    a = a + 543;
    a = a + 544;
    a = a + 545;
    a = a + 546;
    a = a + 547;
    a = a + 548;
    a = a + 549;
    a = a + 550;
    a = a + 551;
    a = a + 552;
    a = a + 553;
    a = a + 554;
    a = a + 555;
    a = a + 556;
    a = a + 557;
    a = a + 558;
    a = a + 559;
    a = a + 560;
    a = a + 561;
    a = a + 562;
    a = a + 563;
    a = a + 564;
    a = a + 565;
    a = a + 566;
    a = a + 567;
    a = a + 568;
    a = a + 569;
    a = a + 570;
    a = a + 571;
    a = a + 572;
    a = a + 573;
    a = a + 574;
    a = a + 575;
    a = a + 576;
    a = a + 577;
    a = a + 578;
    a = a + 579;
    a = a + 580;
    a = a + 581;
    a = a + 582;
    a = a + 583;
    a = a + 584;
    a = a + 585;
    a = a + 586;
    a = a + 587;
    a = a + 588;
    a = a + 589;
    a = a + 590;
    a = a + 591;
    a = a + 592;
    a = a + 593;
    a = a + 594;
    return a;
}
