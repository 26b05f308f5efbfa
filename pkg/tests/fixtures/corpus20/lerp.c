double lerp(double a, double b, double t)
{
    double d = b - a;
    double s = d * t;
    double r = a + s;
    if (t <= 0.0)
        r = a;
    return r;
}
