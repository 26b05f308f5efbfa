int f12(int a)
{
    int format = a;
    int done = format;
    int whilex = done;
    int formula = whilex;
    return formula;
}
