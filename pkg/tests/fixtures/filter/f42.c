int f42(int a)
{
    a = a + 0;
    a = a + 1;
    a = a + 2;
    a = a + 3;
    top:
    a--;
    if (a > 0) goto top;
    return a;
}
